//! Build the stock cyclic posets, verify their cocycles, and look at
//! distance functions and the covering order.
//!
//!     cargo run --example build_posets

use cycat::json::poset_to_json;
use cycat::poset::{cov, CyclicPoset, Elem, PosetParam};

fn main() -> cycat::Result<()> {
    // Z_6: the cyclically ordered set {1..6}
    let z6 = CyclicPoset::zn(6)?;
    println!("Z_6 verify: {}", z6.verify_cocycle(5)?.ok());

    // distance function from basepoint 1: b(i,j) = 0 if i <= j else 1
    let d = z6.distance(Elem(1))?;
    println!(
        "b(2,5) = {}, b(5,2) = {}",
        d.get(Elem(2), Elem(5))?,
        d.get(Elem(5), Elem(2))?
    );

    // covering order: (3,0) <= (1,1) since one sigma-shift catches up
    println!(
        "(3,0) <= (1,0): {}, (3,0) <= (1,1): {}",
        z6.covering_leq(cov(Elem(3), 0), cov(Elem(1), 0))?,
        z6.covering_leq(cov(Elem(3), 0), cov(Elem(1), 1))?,
    );

    // cyclic order predicate and equivalence
    println!(
        "(3,5,1) cyclic: {}, (3,1,5) cyclic: {}",
        z6.cyclic_order_triple(Elem(3), Elem(5), Elem(1))?,
        z6.cyclic_order_triple(Elem(3), Elem(1), Elem(5))?,
    );

    // a product and a star product, both table-backed
    let z3 = CyclicPoset::zn(3)?;
    let prod = CyclicPoset::product(&z3, &z3)?;
    println!("Z_3 x Z_3 verify: {}", prod.verify_cocycle(5)?.ok());
    let star = CyclicPoset::star(&z3, &PosetParam::Chain(2))?;
    println!("Z_3 * chain(2) verify: {}", star.verify_cocycle(5)?.ok());

    // the m-case poset Z_5 * Z in lambda coordinates
    let zm = CyclicPoset::zm_star_z(5, -10, 12)?;
    println!(
        "Z_5 * Z window [-10,12] verify: {}",
        zm.verify_cocycle(5)?.ok()
    );
    println!("lambda(x_1^3) = 8, label: {}", zm.label(Elem(8)));

    // the admissible successor automorphism of Z_6, with lifting offsets
    let phi = z6.canonical_automorphism()?;
    print!("offsets a(x) over Z_6:");
    for x in 1..=6 {
        print!(" {}", phi.offset(&z6, Elem(x))?);
    }
    println!();
    println!("admissible: {}", cycat::poset::check_admissible(&z6, &phi)?);

    // the Frobenius cyclic poset X(Z_6, +1) and its doubled version
    let fro = cycat::poset::frobenius_poset(&z6, &phi)?;
    println!(
        "X(Z_6,+1): {} orbits, {} projective-injective, doubled {}, Psi bijective: {}",
        fro.x_poset.elements().len(),
        fro.x0.len(),
        fro.doubled.elements().len(),
        fro.psi_report.bijective,
    );

    // canonical JSON
    let j = poset_to_json(&CyclicPoset::zn(4)?)?;
    println!("Z_4 as table JSON:\n{}", serde_json::to_string(&j)?);
    Ok(())
}
