//! DOT and SVG emitters. Output is byte-stable: vertices and edges are
//! sorted before writing.

use crate::error::Result;
use crate::mcluster::{psi_map, MArc, MCtx};
use crate::poset::CyclicPoset;
use crate::stable::ClusterQuiver;
use std::fmt::Write;

/// Quiver as Graphviz DOT, vertices labeled "E(x,y)".
pub fn quiver_to_dot(poset: &CyclicPoset, q: &ClusterQuiver) -> String {
    let mut out = String::from("digraph cluster_quiver {\n");
    let label = |i: usize| {
        format!(
            "E({},{})",
            poset.label(q.vertices[i].x0),
            poset.label(q.vertices[i].x1)
        )
    };
    for i in 0..q.vertices.len() {
        let _ = writeln!(out, "  \"{}\";", label(i));
    }
    let mut edges = Vec::new();
    for (i, row) in q.arrows.iter().enumerate() {
        for (j, &mult) in row.iter().enumerate() {
            for _ in 0..mult {
                edges.push(format!("  \"{}\" -> \"{}\";", label(i), label(j)));
            }
        }
    }
    edges.sort();
    for e in edges {
        let _ = writeln!(out, "{e}");
    }
    out.push_str("}\n");
    out
}

/// Strip drawing of a rigid configuration: the doubled boundary with the
/// Psi chords of every arc. Standard objects appear as two same-boundary
/// arcs, nonstandard ones as two crossing chords.
pub fn strip_to_svg(ctx: &MCtx, arcs: &[MArc], lo: i64, hi: i64) -> Result<String> {
    let scale = 24.0;
    let height = 240.0;
    let margin = 20.0;
    let width = (hi - lo) as f64 * scale + 2.0 * margin;
    let xb = |lambda: i64| margin + (lambda - lo) as f64 * scale;
    // the top boundary embeds mirrored: x = -lambda, shifted into view
    let xt = |lambda: i64| margin + (hi - lambda) as f64 * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        margin,
        height - margin,
        width - margin,
        height - margin
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        margin,
        margin,
        width - margin,
        margin
    );
    for lambda in lo..=hi {
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2\"/><circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2\"/>",
            xb(lambda),
            height - margin,
            xt(lambda),
            margin
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" text-anchor=\"middle\">{lambda}</text>",
            xb(lambda),
            height - margin + 12.0
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" text-anchor=\"middle\">{lambda}</text>",
            xt(lambda),
            margin - 6.0
        );
    }
    let mut sorted = arcs.to_vec();
    sorted.sort();
    let mut shapes = Vec::new();
    for arc in &sorted {
        for ch in psi_map(ctx, arc)? {
            let (x1, y1) = match ch.a.1 {
                0 => (xb(ch.a.0), height - margin),
                _ => (xt(ch.a.0), margin),
            };
            let (x2, y2) = match ch.b.1 {
                0 => (xb(ch.b.0), height - margin),
                _ => (xt(ch.b.0), margin),
            };
            if ch.a.1 == ch.b.1 {
                // same-boundary arc: draw as a quadratic arch into the strip
                let midx = (x1 + x2) / 2.0;
                let bend = (x2 - x1).abs() * 0.35;
                let midy = if ch.a.1 == 0 {
                    height - margin - bend.min(height / 2.0 - margin)
                } else {
                    margin + bend.min(height / 2.0 - margin)
                };
                shapes.push(format!(
                    "  <path d=\"M {x1:.1} {y1:.1} Q {midx:.1} {midy:.1} {x2:.1} {y2:.1}\" fill=\"none\" stroke=\"steelblue\"/>"
                ));
            } else {
                shapes.push(format!(
                    "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"firebrick\"/>"
                ));
            }
        }
    }
    shapes.sort();
    for s in shapes {
        let _ = writeln!(out, "{s}");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Convex-polygon drawing of an angulation of the (m s + 2)-gon.
pub fn angulation_to_svg(m: i64, s: i64, chords: &[MArc]) -> String {
    let n = (m * s + 2) as usize;
    let r = 140.0;
    let cx = 160.0;
    let cy = 160.0;
    let pt = |i: usize| {
        let theta = std::f64::consts::TAU * (i as f64) / (n as f64) - std::f64::consts::FRAC_PI_2;
        (cx + r * theta.cos(), cy + r * theta.sin())
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"320\" height=\"320\" viewBox=\"0 0 320 320\">"
    );
    for i in 0..n {
        let (x1, y1) = pt(i);
        let (x2, y2) = pt((i + 1) % n);
        let _ = writeln!(
            out,
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"black\"/>"
        );
        let (lx, ly) = {
            let theta =
                std::f64::consts::TAU * (i as f64) / (n as f64) - std::f64::consts::FRAC_PI_2;
            (cx + (r + 12.0) * theta.cos(), cy + (r + 12.0) * theta.sin())
        };
        let _ = writeln!(
            out,
            "  <text x=\"{lx:.1}\" y=\"{ly:.1}\" font-size=\"10\" text-anchor=\"middle\">{i}</text>"
        );
    }
    let mut sorted = chords.to_vec();
    sorted.sort();
    for ch in &sorted {
        let (x1, y1) = pt(ch.l1 as usize);
        let (x2, y2) = pt(ch.l2 as usize);
        let _ = writeln!(
            out,
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"steelblue\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Elem;
    use crate::stable::{Cluster, StableCtx};

    #[test]
    fn fan_quiver_dot_is_stable() {
        let p = CyclicPoset::zn(6).unwrap();
        let ctx = StableCtx::new(&p).unwrap();
        let c = Cluster::new(vec![
            ctx.arc(Elem(1), Elem(3)).unwrap(),
            ctx.arc(Elem(1), Elem(4)).unwrap(),
            ctx.arc(Elem(1), Elem(5)).unwrap(),
        ]);
        let q = ctx.quiver(&c).unwrap();
        let d1 = quiver_to_dot(&p, &q);
        let d2 = quiver_to_dot(&p, &q);
        assert_eq!(d1, d2);
        assert_eq!(d1.matches("->").count(), 2); // A3 path
        assert!(d1.contains("E(1,3)"));
    }

    #[test]
    fn svg_emitters_are_stable() {
        let ex = crate::mcluster::example_m5().unwrap();
        let s1 = strip_to_svg(&ex.ctx, &ex.cluster, ex.window.0, ex.window.1).unwrap();
        let s2 = strip_to_svg(&ex.ctx, &ex.cluster, ex.window.0, ex.window.1).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.starts_with("<svg"));
        let m3 = MCtx::new(3).unwrap();
        let cl = crate::mcluster::enumerate_standard_clusters(&m3, 2).unwrap();
        let svg = angulation_to_svg(3, 2, &cl[0].arcs);
        assert!(svg.contains("line"));
    }
}
