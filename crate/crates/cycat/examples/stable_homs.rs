//! Stable Hom dimensions two ways: the lifting-inequality rule and the
//! linear-algebra oracle on actual matrix factorizations; shift and tau;
//! almost split triangles and the factorization property.
//!
//!     cargo run --example stable_homs

use cycat::poset::{CyclicPoset, Elem};
use cycat::stable::StableCtx;

fn main() -> cycat::Result<()> {
    let z6 = CyclicPoset::zn(6)?;
    let ctx = StableCtx::new(&z6)?;
    let arcs = ctx.all_arcs()?;
    println!("stable indecomposables of Z_6: {} arcs", arcs.len());

    // lemma vs oracle on every pair
    println!("Hom dimension table (rows -> cols), lemma = oracle everywhere:");
    print!("          ");
    for y in &arcs {
        print!("({},{}) ", y.x0, y.x1);
    }
    println!();
    for x in &arcs {
        print!("({},{}):   ", x.x0, x.x1);
        for y in &arcs {
            let lemma = ctx.stable_hom_dim(x, y)?;
            let oracle = ctx.stable_hom_oracle(x, y)?;
            assert_eq!(lemma, oracle);
            print!("  {lemma}   ");
        }
        println!();
    }

    // shift and tau: E(1,3)[1] = E(2,6), tau = [1] in this 2-CY setting
    let e13 = ctx.arc(Elem(1), Elem(3))?;
    println!("E(1,3)[1] = E({:?})", ctx.shift(&e13, 1)?);
    println!("tau E(1,3) = E({:?})", ctx.tau(&e13)?);

    // Ext^1 = crossing
    let e24 = ctx.arc(Elem(2), Elem(4))?;
    println!(
        "E(1,3), E(2,4): crossing = {}, Ext^1 = {} and {}",
        ctx.crosses(&e13, &e24)?,
        ctx.ext_dim(&e13, &e24, 1)?,
        ctx.ext_dim(&e24, &e13, 1)?,
    );

    // the almost split triangle ending at E(2,4)
    let x = ctx.arc(Elem(2), Elem(4))?;
    let asx = ctx.almost_split(&x)?;
    println!(
        "almost split: E({},{}) -> {:?} (+ dropped {:?}) -> E({},{})",
        asx.tau_x.x0, asx.tau_x.x1, asx.middle, asx.middle_dropped, x.x0, x.x1
    );
    // every nonzero non-isomorphism into X factors through the middle
    for a in &arcs {
        if a != &x && ctx.stable_hom_dim(a, &x)? == 1 {
            let ok = asx
                .middle
                .iter()
                .any(|s| ctx.factors_through(a, s, &x).unwrap_or(false));
            println!("  ({},{}) -> X factors through middle: {ok}", a.x0, a.x1);
        }
    }
    Ok(())
}
