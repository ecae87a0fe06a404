//! Standard m-clusters as (m+2)-angulations: Fuss-Catalan counts, the
//! bijection roundtrip, and mutation with m partners and a certified chain
//! of exchange triangles.
//!
//!     cargo run --example mcluster_angulations

use cycat::mcluster::{
    cluster_to_angulation, enumerate_standard_clusters, fuss_catalan, mutation_partners, MCtx,
};

fn main() -> cycat::Result<()> {
    println!("standard m-cluster counts on the (m s + 2)-gon window:");
    for m in [3i64, 4, 5] {
        let ctx = MCtx::new(m)?;
        for s in [1i64, 2, 3] {
            let clusters = enumerate_standard_clusters(&ctx, s)?;
            println!(
                "  m = {m}, s = {s}: {:>3} clusters  (Fuss-Catalan {})",
                clusters.len(),
                fuss_catalan(m as u64, s as u64)
            );
        }
    }

    // roundtrip through the angulation representation
    let m3 = MCtx::new(3)?;
    let clusters = enumerate_standard_clusters(&m3, 2)?;
    println!("\nm = 3, s = 2 (the 8-gon into two pentagons):");
    for c in &clusters {
        let ang = cluster_to_angulation(&m3, 2, c)?;
        println!("  chords {:?}", ang.chords);
    }

    // mutation: removing a chord leaves a (2m+2)-gon with m other long
    // diagonals; the chain of exchange triangles certifies in MF
    let c = &clusters[0];
    let t = c.arcs[0];
    let mp = mutation_partners(&m3, 2, c, &t)?;
    println!(
        "\nmutating {:?}: partners {:?}, chain of {} certified conflations",
        t,
        mp.partners,
        mp.chain.len()
    );
    Ok(())
}
