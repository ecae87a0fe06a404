//! The scalar ring k[t]/(t^N), twisted composition of labeled matrices,
//! the eta/xi/theta maps, and a window of the completed linearization.
//!
//!     cargo run --example linearize

use cycat::linear::{theta_window, theta_window_product, LinCtx, PObject, TwistedCtx};
use cycat::poset::{CyclicPoset, Elem};
use cycat::scalar::ScalarRing;

fn main() -> cycat::Result<()> {
    let ring = ScalarRing::default(); // F_101, precision 8
    let a = ring.from_coeffs(&[3, 5, 0, 7]);
    let inv = ring.inv(&a)?;
    println!("a = {}", ring.format(&a));
    println!("a^-1 = {}", ring.format(&inv));
    println!("a * a^-1 = {}", ring.format(&ring.mul(&a, &inv)));

    let z5 = CyclicPoset::zn(5)?;
    let ctx = LinCtx::new(&z5, ring);

    // composition twists by t^{c(xyz)}: going around the circle picks up t
    let f13 = ctx.basic(Elem(1), Elem(3))?;
    let f31 = ctx.basic(Elem(3), Elem(1))?;
    let loop_back = ctx.compose(&f31, &f13)?;
    println!(
        "f_31 . f_13 = {} * id_1   (c(1,3,1) = 1)",
        ctx.ring.format(loop_back.entry(0, 0))
    );

    // eta and xi for the successor automorphism: xi . eta = t
    let phi = z5.canonical_automorphism()?;
    let tctx = TwistedCtx::new(&z5, ring, &phi);
    let v = PObject::new(vec![Elem(1), Elem(4)]);
    let eta = tctx.eta(&v)?;
    let xi = tctx.xi(&v)?;
    let t_id = tctx.lin.compose(&xi, &eta)?;
    println!(
        "xi . eta on P_1+P_4 = diag({}, {})",
        ring.format(t_id.entry(0, 0)),
        ring.format(t_id.entry(1, 1))
    );

    // theta: the unique factorization of a twisted differential through eta
    let mut d = ctx.zero_morphism(v.clone(), v.clone());
    *d.entry_mut(0, 1) = ring.one();
    *d.entry_mut(1, 0) = ring.one();
    let theta = tctx.theta(&v, &d)?;
    println!(
        "theta entries: ({}, {}, {}, {})",
        ring.format(theta.entry(0, 0)),
        ring.format(theta.entry(0, 1)),
        ring.format(theta.entry(1, 0)),
        ring.format(theta.entry(1, 1)),
    );

    // a window of the completed linearization: Theta(f_{2,4}) has ones
    // exactly where the level shift equals b(2,4)
    let w = theta_window(&ctx, Elem(2), Elem(4), &ring.one(), -2, 2)?;
    println!("Theta(f_24) window rows (levels -2..=2):");
    for j in -2..=2 {
        let row: Vec<u32> = (-2..=2).map(|i| w.at(j, i)).collect();
        println!("  {row:?}");
    }

    // functoriality on the interior of the window
    let g = ring.from_coeffs(&[1, 2]);
    let h = ring.from_coeffs(&[4]);
    let wg = theta_window(&ctx, Elem(1), Elem(3), &g, -4, 4)?;
    let wh = theta_window(&ctx, Elem(3), Elem(4), &h, -4, 4)?;
    let prod = theta_window_product(&wh, &wg)?;
    let comp = ctx
        .ring
        .mul_checked(&h, &g, z5.cocycle(Elem(1), Elem(3), Elem(4))? as usize)?;
    let direct = theta_window(&ctx, Elem(1), Elem(4), &comp, -4, 4)?;
    let agree = (-2..=2).all(|j| (-2..=2).all(|i| prod.at(j, i) == direct.at(j, i)));
    println!("Theta(h g) = Theta(h) Theta(g) on the interior: {agree}");
    Ok(())
}
