//! JSON wire formats: posets (table or builder backed), sparse morphisms,
//! matrix factorization objects, decompositions, clusters and angulations.
//! All emitters sort their keys so identical inputs give identical bytes.

use crate::error::{Error, Result};
use crate::linear::{LinCtx, PMorphism, PObject};
use crate::mcluster::{Angulation, MArc, MPoint};
use crate::mf::{Decomposition, EDescriptor, EVariant, MFObject};
use crate::poset::{CyclicPoset, Elem, PosetParam};
use crate::scalar::ScalarRing;
use crate::stable::{Arc, Cluster};
use serde::{Deserialize, Serialize};

/// Poset wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PosetJson {
    Table {
        elements: Vec<i64>,
        /// triples [x, y, z, c], sorted lexicographically; omitted entries
        /// are zero
        cocycle: Vec<[i64; 4]>,
    },
    Builder {
        name: String,
        #[serde(default)]
        params: serde_json::Value,
        #[serde(default)]
        window: Option<[i64; 2]>,
    },
}

pub fn poset_to_json(p: &CyclicPoset) -> Result<PosetJson> {
    // emit a table: canonical and builder-independent
    let elems = p.elements();
    let mut cocycle = Vec::new();
    for &x in &elems {
        for &y in &elems {
            for &z in &elems {
                let c = p.cocycle(x, y, z)?;
                if c != 0 {
                    cocycle.push([x.0, y.0, z.0, c]);
                }
            }
        }
    }
    cocycle.sort();
    Ok(PosetJson::Table {
        elements: elems.iter().map(|e| e.0).collect(),
        cocycle,
    })
}

pub fn poset_from_json(j: &PosetJson) -> Result<CyclicPoset> {
    match j {
        PosetJson::Table { elements, cocycle } => {
            let triples: Vec<(i64, i64, i64, i64)> =
                cocycle.iter().map(|t| (t[0], t[1], t[2], t[3])).collect();
            CyclicPoset::table(elements.clone(), None, &triples)
        }
        PosetJson::Builder {
            name,
            params,
            window,
        } => {
            let get = |key: &str| -> Result<i64> {
                params
                    .get(key)
                    .and_then(|v| v.as_i64())
                    .ok_or_else(|| Error::InvalidParams(format!("missing builder param {key}")))
            };
            match name.as_str() {
                "Zn" => CyclicPoset::zn(get("n")?),
                "Zwindow" => {
                    let [lo, hi] =
                        window.ok_or_else(|| Error::InvalidParams("window required".into()))?;
                    CyclicPoset::zwindow(lo, hi)
                }
                "ZmStarZ" => {
                    let [lo, hi] =
                        window.ok_or_else(|| Error::InvalidParams("window required".into()))?;
                    CyclicPoset::zm_star_z(get("m")?, lo, hi)
                }
                "ZxZ" => {
                    let [lo, hi] =
                        window.ok_or_else(|| Error::InvalidParams("window required".into()))?;
                    CyclicPoset::zxz(lo, hi, lo, hi)
                }
                "product" => {
                    let n1 = get("n1")?;
                    let n2 = get("n2")?;
                    let p1 = CyclicPoset::zn(n1)?;
                    let p2 = CyclicPoset::zn(n2)?;
                    CyclicPoset::product(&p1, &p2)
                }
                "star" => {
                    let n = get("n")?;
                    let chain = get("chain")?;
                    let x = CyclicPoset::zn(n)?;
                    CyclicPoset::star(&x, &PosetParam::Chain(chain as usize))
                }
                other => Err(Error::UnknownFormat(format!("builder {other}"))),
            }
        }
    }
}

/// Sparse morphism: entries [[row, col, [c0, c1, ...]], ...].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub entries: Vec<(usize, usize, Vec<i64>)>,
}

pub fn morphism_to_json(_ctx: &LinCtx, f: &PMorphism) -> MorphismJson {
    let mut entries = Vec::new();
    for r in 0..f.target.len() {
        for c in 0..f.source.len() {
            let s = f.entry(r, c);
            if !s.is_zero() {
                let mut coeffs: Vec<i64> = s.coeffs().iter().map(|&x| x as i64).collect();
                while coeffs.last() == Some(&0) {
                    coeffs.pop();
                }
                entries.push((r, c, coeffs));
            }
        }
    }
    entries.sort();
    MorphismJson {
        source: f.source.summands.iter().map(|e| e.0).collect(),
        target: f.target.summands.iter().map(|e| e.0).collect(),
        entries,
    }
}

pub fn morphism_from_json(ctx: &LinCtx, j: &MorphismJson) -> Result<PMorphism> {
    let source = PObject::new(j.source.iter().map(|&e| Elem(e)).collect());
    let target = PObject::new(j.target.iter().map(|&e| Elem(e)).collect());
    let mut f = ctx.zero_morphism(source, target);
    for (r, c, coeffs) in &j.entries {
        if *r >= f.target.len() || *c >= f.source.len() {
            return Err(Error::InvalidParams(format!(
                "entry ({r},{c}) out of range"
            )));
        }
        if coeffs.len() > ctx.ring.precision() {
            return Err(Error::PrecisionExhausted(format!(
                "entry ({r},{c}) has {} coefficients, precision is {}",
                coeffs.len(),
                ctx.ring.precision()
            )));
        }
        *f.entry_mut(*r, *c) = ctx.ring.from_coeffs(coeffs);
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MFObjectJson {
    pub summands: Vec<i64>,
    pub d: Vec<(usize, usize, Vec<i64>)>,
}

pub fn mf_to_json(ctx: &LinCtx, obj: &MFObject) -> MFObjectJson {
    let m = morphism_to_json(ctx, &obj.d);
    MFObjectJson {
        summands: obj.object.summands.iter().map(|e| e.0).collect(),
        d: m.entries,
    }
}

pub fn mf_from_json(ctx: &LinCtx, j: &MFObjectJson) -> Result<MFObject> {
    let m = MorphismJson {
        source: j.summands.clone(),
        target: j.summands.clone(),
        entries: j.d.clone(),
    };
    let d = morphism_from_json(ctx, &m)?;
    Ok(MFObject {
        object: d.source.clone(),
        d,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EDescriptorJson {
    pub x: i64,
    pub y: i64,
    pub variant: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub summands_e: Vec<EDescriptorJson>,
    pub base_change: MorphismJson,
}

pub fn decomposition_to_json(ctx: &LinCtx, d: &Decomposition) -> DecompositionJson {
    DecompositionJson {
        summands_e: d
            .summands
            .iter()
            .map(|e| EDescriptorJson {
                x: e.x.0,
                y: e.y.0,
                variant: match e.variant {
                    EVariant::Plain => "plain".into(),
                    EVariant::Primed => "primed".into(),
                },
            })
            .collect(),
        base_change: morphism_to_json(ctx, &d.base_change),
    }
}

pub fn edescriptor_from_json(j: &EDescriptorJson) -> Result<EDescriptor> {
    let variant = match j.variant.as_str() {
        "plain" => EVariant::Plain,
        "primed" => EVariant::Primed,
        other => return Err(Error::UnknownFormat(format!("variant {other}"))),
    };
    Ok(EDescriptor {
        x: Elem(j.x),
        y: Elem(j.y),
        variant,
    })
}

/// Cluster: sorted list of [x0, x1].
pub fn cluster_to_json(c: &Cluster) -> Vec<[i64; 2]> {
    let mut v: Vec<[i64; 2]> = c.arcs.iter().map(|a| [a.x0.0, a.x1.0]).collect();
    v.sort();
    v
}

pub fn cluster_from_json(v: &[[i64; 2]]) -> Cluster {
    Cluster::new(
        v.iter()
            .map(|[a, b]| Arc {
                x0: Elem(*a),
                x1: Elem(*b),
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MArcJson {
    pub p: i64,
    pub k: i64,
    pub q: i64,
    pub j: i64,
}

pub fn marc_to_json(m: i64, arc: &MArc) -> MArcJson {
    let (a, b) = arc.points(m);
    MArcJson {
        p: a.p,
        k: a.k,
        q: b.p,
        j: b.k,
    }
}

pub fn marc_from_json(m: i64, j: &MArcJson) -> Result<MArc> {
    MArc::new(
        MPoint { p: j.p, k: j.k }.lambda(m),
        MPoint { p: j.q, k: j.j }.lambda(m),
    )
}

/// Angulation: sorted chord list of lambda pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngulationJson {
    pub m: i64,
    pub s: i64,
    pub chords: Vec<[i64; 2]>,
}

pub fn angulation_to_json(a: &Angulation) -> AngulationJson {
    let mut chords: Vec<[i64; 2]> = a.chords.iter().map(|c| [c.l1, c.l2]).collect();
    chords.sort();
    AngulationJson {
        m: a.m,
        s: a.s,
        chords,
    }
}

pub fn angulation_from_json(j: &AngulationJson) -> Result<Angulation> {
    let chords = j
        .chords
        .iter()
        .map(|[a, b]| MArc::new(*a, *b))
        .collect::<Result<Vec<_>>>()?;
    Ok(Angulation {
        m: j.m,
        s: j.s,
        chords,
    })
}

/// Ring parameters usable from the CLI.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RingJson {
    pub prime: u32,
    pub precision: usize,
}

pub fn ring_from_json(r: &RingJson) -> Result<ScalarRing> {
    ScalarRing::new(r.prime, r.precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::make_e;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poset_roundtrip_and_canonical_bytes() {
        let p = CyclicPoset::zn(5).unwrap();
        let j = poset_to_json(&p).unwrap();
        let s1 = serde_json::to_string(&j).unwrap();
        let back = poset_from_json(&j).unwrap();
        // identical cocycles
        for x in p.elements() {
            for y in p.elements() {
                for z in p.elements() {
                    assert_eq!(p.cocycle(x, y, z).unwrap(), back.cocycle(x, y, z).unwrap());
                }
            }
        }
        let s2 = serde_json::to_string(&poset_to_json(&back).unwrap()).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn builder_json() {
        let j: PosetJson = serde_json::from_str(
            r#"{"kind":"builder","name":"ZmStarZ","params":{"m":5},"window":[-10,10]}"#,
        )
        .unwrap();
        let p = poset_from_json(&j).unwrap();
        assert!(p.contains(Elem(8)));
        let bad: PosetJson =
            serde_json::from_str(r#"{"kind":"builder","name":"nope","params":{}}"#).unwrap();
        assert!(poset_from_json(&bad).is_err());
    }

    #[test]
    fn morphism_sparse_roundtrip() {
        let p = CyclicPoset::zn(6).unwrap();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let src = PObject::new(vec![Elem(rng.gen_range(1..=6)), Elem(rng.gen_range(1..=6))]);
            let tgt = PObject::new(vec![Elem(rng.gen_range(1..=6))]);
            let mut f = ctx.zero_morphism(src.clone(), tgt.clone());
            *f.entry_mut(0, 1) = ctx.ring.from_coeffs(&[rng.gen_range(0..101), 3]);
            let j = morphism_to_json(&ctx, &f);
            let back = morphism_from_json(&ctx, &j).unwrap();
            assert_eq!(f, back);
        }
    }

    #[test]
    fn mf_and_decomposition_json() {
        let p = CyclicPoset::zn(6).unwrap();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let e = make_e(&ctx, &EDescriptor::plain(Elem(1), Elem(4))).unwrap();
        let j = mf_to_json(&ctx, &e);
        let back = mf_from_json(&ctx, &j).unwrap();
        assert_eq!(e, back);
        let dec = crate::mf::decompose(&ctx, &e).unwrap();
        let dj = decomposition_to_json(&ctx, &dec);
        assert_eq!(dj.summands_e.len(), 1);
        assert_eq!(dj.summands_e[0].x, 1);
        assert_eq!(dj.summands_e[0].y, 4);
    }

    #[test]
    fn marc_json_roundtrip() {
        let arc = MArc::new(1, 7).unwrap();
        let j = marc_to_json(5, &arc);
        assert_eq!((j.p, j.k, j.q, j.j), (1, 0, 2, 1));
        assert_eq!(marc_from_json(5, &j).unwrap(), arc);
    }
}
