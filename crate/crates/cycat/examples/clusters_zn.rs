//! Clusters of Z_n as triangulations: enumeration, mutation with exchange
//! triangles, and the cluster quiver with Fomin-Zelevinsky mutation.
//!
//!     cargo run --example clusters_zn

use cycat::export::quiver_to_dot;
use cycat::poset::{CyclicPoset, Elem};
use cycat::stable::{Cluster, StableCtx};

fn main() -> cycat::Result<()> {
    for n in [4i64, 5, 6, 7, 8] {
        let p = CyclicPoset::zn(n)?;
        let ctx = StableCtx::new(&p)?;
        let clusters = ctx.enumerate_clusters()?;
        println!("Z_{n}: {} clusters (Catalan)", clusters.len());
    }

    let z6 = CyclicPoset::zn(6)?;
    let ctx = StableCtx::new(&z6)?;
    let fan = Cluster::new(vec![
        ctx.arc(Elem(1), Elem(3))?,
        ctx.arc(Elem(1), Elem(4))?,
        ctx.arc(Elem(1), Elem(5))?,
    ]);
    let t = ctx.arc(Elem(1), Elem(4))?;
    let m = ctx.mutate(&t, &fan)?;
    println!(
        "mutating E(1,4) in the fan: T* = E({},{}), witnesses a = {}, b = {}",
        m.t_star.x0, m.t_star.x1, m.a, m.b
    );
    let (first, second) = ctx.exchange_triangles(&t, &fan)?;
    println!(
        "exchange conflations certified: middles {:?} and {:?}",
        first.b.object.summands, second.b.object.summands
    );

    // quiver of the fan cluster: an A3 path; FZ mutation matches the
    // quiver of the mutated cluster
    let q = ctx.quiver(&fan)?;
    println!("fan quiver DOT:\n{}", quiver_to_dot(&z6, &q));
    let fz = ctx.fz_mutate(&q, &t)?;
    let mutated = fan.replace(&t, m.t_star);
    let qm = ctx.quiver(&mutated)?;
    let fz_edges: u32 = fz.arrows.iter().flatten().sum();
    let qm_edges: u32 = qm.arrows.iter().flatten().sum();
    println!("FZ mutation arrow count {fz_edges}, mutated-cluster quiver {qm_edges}");

    // the infinite-type zig-zag picture over Z x Z
    let zz = cycat::stable::build_zigzag(3)?;
    println!("zig-zag window: {} arcs, first few components:", zz.len());
    for a in zz.iter().take(6) {
        let (s0, i0) = cycat::poset::zxz_parts(a.arc.x0);
        let (s1, i1) = cycat::poset::zxz_parts(a.arc.x1);
        println!(
            "  E(({s0},{i0}), ({s1},{i1})) in {:?} ({})",
            a.component,
            a.component.ar_type()
        );
    }
    Ok(())
}
