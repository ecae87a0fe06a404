//! Matrix factorization objects (V, d) with d^2 = t: the indecomposables
//! E(x,y), the projective-injectives G_phi P, twisted validation, and the
//! Krull-Schmidt decomposition with its base-change certificate.
//!
//!     cargo run --example matrix_factorizations

use cycat::linear::{LinCtx, PObject, TwistedCtx};
use cycat::mf::{self, EDescriptor, MFObject};
use cycat::poset::{CyclicPoset, Elem};
use cycat::scalar::ScalarRing;

fn main() -> cycat::Result<()> {
    let z6 = CyclicPoset::zn(6)?;
    let ring = ScalarRing::default();
    let ctx = LinCtx::new(&z6, ring);
    let phi = z6.canonical_automorphism()?;
    let tctx = TwistedCtx::new(&z6, ring, &phi);

    // E(1,3): counterdiagonal d with d^2 = t
    let e13 = mf::make_e(&ctx, &EDescriptor::plain(Elem(1), Elem(3)))?;
    mf::validate(&ctx, &e13)?;
    mf::validate_twisted(&tctx, &e13)?;
    println!("E(1,3): valid, twisted-valid");

    // E(x, phi x) is the projective-injective G_phi P_x
    let g1 = mf::make_gphi(&tctx, &PObject::single(Elem(1)))?;
    let e12 = mf::make_e(&ctx, &EDescriptor::plain(Elem(1), Elem(2)))?;
    println!("E(1,2) = G_phi P_1: {}", g1 == e12);
    println!(
        "E(1,2) projective-injective: {}",
        mf::is_proj_inj(&tctx, &EDescriptor::plain(Elem(1), Elem(2)))?
    );

    // admitted pairs: (phi x, y, phi^{-1} x) in cyclic order
    println!(
        "E(1,3) admitted in the twisted category: {}",
        mf::admitted_in_twisted(&tctx, Elem(1), Elem(3))?
    );

    // assemble E(1,3) + E(2,5), scramble by a base change, decompose
    let e25 = mf::make_e(&ctx, &EDescriptor::plain(Elem(2), Elem(5)))?;
    let sum = MFObject {
        object: e13.object.direct_sum(&e25.object),
        d: ctx.direct_sum(&e13.d, &e25.d),
    };
    // conjugate by an elementary transvection and a unit scaling
    let mut u = ctx.identity(&sum.object);
    *u.entry_mut(2, 0) = ring.from_coeffs(&[42, 7]);
    let mut uinv = ctx.identity(&sum.object);
    *uinv.entry_mut(2, 0) = ring.neg(&ring.from_coeffs(&[42, 7]));
    let scrambled = MFObject {
        object: sum.object.clone(),
        d: ctx.compose_trunc(&ctx.compose_trunc(&u, &sum.d)?, &uinv)?,
    };
    let dec = mf::decompose(&ctx, &scrambled)?;
    println!("decomposed into:");
    for s in &dec.summands {
        println!("  E({}, {})  [{:?}]", s.x, s.y, s.variant);
    }
    // the base change certificate conjugates d to counterdiagonal blocks
    let ud = ctx.compose_trunc(&dec.base_change, &scrambled.d)?;
    let uduinv = ctx.compose_trunc(&ud, &dec.base_change_inv)?;
    println!(
        "U d U^-1 matches the block form: {}",
        uduinv == dec.conjugated.d
    );

    // a conflation: E(1,3) -> E(1,5) + E(2,3) -> E(2,5) with basic maps
    let exb = mf::make_e(&ctx, &EDescriptor::plain(Elem(1), Elem(5)))?;
    let eay = mf::make_e(&ctx, &EDescriptor::plain(Elem(2), Elem(3)))?;
    let mid = MFObject {
        object: exb.object.direct_sum(&eay.object),
        d: ctx.direct_sum(&exb.d, &eay.d),
    };
    let mut i = ctx.zero_morphism(e13.object.clone(), mid.object.clone());
    *i.entry_mut(0, 0) = ring.one();
    *i.entry_mut(1, 1) = ring.one();
    *i.entry_mut(2, 0) = ring.one();
    *i.entry_mut(3, 1) = ring.one();
    let mut p = ctx.zero_morphism(mid.object.clone(), e25.object.clone());
    *p.entry_mut(0, 0) = ring.one();
    *p.entry_mut(1, 1) = ring.one();
    *p.entry_mut(0, 2) = ring.neg(&ring.one());
    *p.entry_mut(1, 3) = ring.neg(&ring.one());
    let conf = mf::conflation(&ctx, &e13, &mid, &e25, &i, &p)?;
    println!(
        "conflation certified with a splitting: r i = id on {} summands",
        conf.a.object.len()
    );
    Ok(())
}
