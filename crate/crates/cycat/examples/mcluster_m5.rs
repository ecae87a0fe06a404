//! The m = 5 worked configuration: a nonstandard cluster whose doubled
//! strip picture has a single central 8-gon among 7-gon faces, with the
//! exchange counts of its sides. Writes an SVG of the strip.
//!
//!     cargo run --example mcluster_m5

use cycat::export::strip_to_svg;
use cycat::mcluster::{example_m5, MArc, MClass};

fn main() -> cycat::Result<()> {
    let ex = example_m5()?;
    println!("window: lambda in [{}, {}]", ex.window.0, ex.window.1);
    println!("cluster ({} arcs):", ex.cluster.len());
    for a in &ex.cluster {
        println!("  ({:>3},{:>3})  {:?}", a.l1, a.l2, ex.ctx.class(a)?);
    }
    println!("pairwise compatible: {}", ex.pairwise_compatible()?);
    println!("maximal on the window core: {}", ex.is_maximal_on_core()?);
    println!("complete face sizes: {:?}", ex.faces.face_sizes);
    if let Some(face) = &ex.faces.central {
        println!("central face ({} sides): {:?}", face.len(), face);
    }

    // exchange counts of representative sides
    let y1 = MArc::new(0, 8)?; // central nonstandard
    let y2 = MArc::new(-4, 9)?; // non-central nonstandard
    let x2 = MArc::new(9, 15)?; // non-central standard
    assert_eq!(ex.ctx.class(&y1)?, MClass::NonstandardRigid);
    println!(
        "exchange partners of the central side Y1: {}",
        ex.mutation_count(&y1)?
    );
    println!("exchange partners of Y2: {}", ex.mutation_count(&y2)?);
    println!(
        "exchange partners of the standard side X2: {}",
        ex.mutation_count(&x2)?
    );

    let svg = strip_to_svg(&ex.ctx, &ex.cluster, ex.window.0, ex.window.1)?;
    let path = std::env::temp_dir().join("cycat_m5_strip.svg");
    std::fs::write(&path, svg)?;
    println!("strip drawing written to {}", path.display());
    Ok(())
}
