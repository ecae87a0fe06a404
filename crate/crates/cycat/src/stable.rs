//! The stable cluster category C_phi(Z) of a cyclically ordered poset with
//! successor automorphism: stable Homs (structural inequalities plus an
//! independent linear-algebra oracle), shift and tau, almost split
//! triangles, compatibility, clusters, mutation, and cluster quivers.

use crate::error::{Error, Result};
use crate::linear::{LinCtx, PMorphism, TwistedCtx};
use crate::mf::{self, Conflation, EDescriptor, MFObject};
use crate::poset::{cov, AdmissibleAutomorphism, CovElem, CyclicPoset, Elem};
use crate::scalar::ScalarRing;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A non-projective-injective indecomposable of the stable category,
/// canonically written with endpoints in increasing linear order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub x0: Elem,
    pub x1: Elem,
}

/// A set of pairwise compatible arcs, maximal within the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub arcs: Vec<Arc>,
}

impl Cluster {
    pub fn new(mut arcs: Vec<Arc>) -> Self {
        arcs.sort();
        Cluster { arcs }
    }

    pub fn contains(&self, a: &Arc) -> bool {
        self.arcs.binary_search(a).is_ok()
    }

    pub fn replace(&self, t: &Arc, t_star: Arc) -> Cluster {
        let mut arcs: Vec<Arc> = self.arcs.iter().copied().filter(|a| a != t).collect();
        arcs.push(t_star);
        Cluster::new(arcs)
    }
}

/// Quiver of a cluster: one vertex per arc, arrow multiplicities between
/// them. Vertices are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterQuiver {
    pub vertices: Vec<Arc>,
    /// arrows[i][j] = number of arrows vertex i -> vertex j.
    pub arrows: Vec<Vec<u32>>,
}

/// The almost split triangle tau X -> M -> X.
#[derive(Debug, Clone)]
pub struct AlmostSplit {
    pub tau_x: Arc,
    /// Middle summands surviving in the stable category.
    pub middle: Vec<Arc>,
    /// Middle summands of the exact sequence that are projective-injective
    /// (dropped stably), as endpoint pairs.
    pub middle_dropped: Vec<(Elem, Elem)>,
    pub x: Arc,
}

/// A mutation step: the exchange partner with its quadrilateral witnesses.
#[derive(Debug, Clone, Copy)]
pub struct Mutation {
    pub t_star: Arc,
    pub a: Elem,
    pub b: Elem,
}

/// Context for stable-category computations over a cyclically ordered
/// poset with successors; phi is the successor automorphism and the
/// default oracle precision is N = 4 (t * Hom already factors through
/// projective-injectives, so degree >= 2 contributes nothing).
pub struct StableCtx<'a> {
    pub poset: &'a CyclicPoset,
    pub phi: AdmissibleAutomorphism,
    pub ring: ScalarRing,
}

pub const ORACLE_PRECISION: usize = 4;

impl<'a> StableCtx<'a> {
    pub fn new(poset: &'a CyclicPoset) -> Result<Self> {
        let phi = poset.canonical_automorphism()?;
        Ok(StableCtx {
            poset,
            phi,
            ring: ScalarRing::new(crate::scalar::DEFAULT_PRIME, ORACLE_PRECISION)?,
        })
    }

    fn lin(&self) -> LinCtx<'_> {
        LinCtx::new(self.poset, self.ring)
    }

    fn twisted(&self) -> TwistedCtx<'_> {
        TwistedCtx {
            lin: self.lin(),
            phi: &self.phi,
        }
    }

    /// Canonicalize an endpoint pair into an Arc. Rejects equivalent
    /// endpoints (the stable object would be zero or undefined).
    pub fn arc(&self, a: Elem, b: Elem) -> Result<Arc> {
        if self.poset.equivalent(a, b)? {
            return Err(Error::InvalidPair {
                x: a.0,
                y: b.0,
                reason: "stable objects need non-equivalent endpoints".into(),
            });
        }
        if self.poset.b(a, b)? == 0 {
            Ok(Arc { x0: a, x1: b })
        } else {
            Ok(Arc { x0: b, x1: a })
        }
    }

    pub fn is_proj_inj(&self, x: &Arc) -> Result<bool> {
        mf::is_proj_inj(&self.twisted(), &EDescriptor::plain(x.x0, x.x1))
    }

    /// All stable arcs with both endpoints in the window (projective-
    /// injectives excluded).
    pub fn all_arcs(&self) -> Result<Vec<Arc>> {
        let elems = self.poset.elements();
        let mut out = Vec::new();
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems[i + 1..] {
                if self.poset.equivalent(a, b)? {
                    continue;
                }
                let arc = self.arc(a, b)?;
                if !self.is_proj_inj(&arc)? {
                    out.push(arc);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn mf_object(&self, x: &Arc) -> Result<MFObject> {
        mf::make_e(&self.lin(), &EDescriptor::plain(x.x0, x.x1))
    }

    /// dim Hom(X, Y) in the stable category by the lifting inequalities:
    /// 1 iff liftings exist with x0 <= y0 < x1^- and x1 <= y1 < sigma x0^-.
    pub fn stable_hom_dim(&self, x: &Arc, y: &Arc) -> Result<u32> {
        let x0 = cov(x.x0, 0);
        let x1 = cov(x.x1, 0);
        for (u, v) in [(y.x0, y.x1), (y.x1, y.x0)] {
            if self.hom_witness(x0, x1, u, v)?.is_some() {
                return Ok(1);
            }
        }
        Ok(0)
    }

    /// The lift levels (j0, j1) realizing the Hom inequalities for the
    /// assignment (u -> y0 slot, v -> y1 slot), if any.
    fn hom_witness(
        &self,
        x0: CovElem,
        x1: CovElem,
        u: Elem,
        v: Elem,
    ) -> Result<Option<(CovElem, CovElem)>> {
        let p = self.poset;
        // minimal lift of u at or above x0
        let ju = x0.level + p.b(x0.elem, u)?;
        let cu = cov(u, ju);
        let x1_pred = p.cov_pred(x1)?;
        if !p.covering_lt(cu, x1_pred)? && !p.covering_equiv(cu, x1_pred)? {
            // need cu < x1^-: strictly below
        }
        if !(p.covering_leq(x0, cu)? && p.covering_lt(cu, x1_pred)?) {
            return Ok(None);
        }
        let jv = x1.level + p.b(x1.elem, v)?;
        let cv = cov(v, jv);
        let sx0_pred = {
            let pr = p.cov_pred(x0)?;
            cov(pr.elem, pr.level + 1)
        };
        if !(p.covering_leq(x1, cv)? && p.covering_lt(cv, sx0_pred)?) {
            return Ok(None);
        }
        Ok(Some((cu, cv)))
    }

    /// Independent oracle: dim over F_p of {morphisms commuting with d}
    /// modulo those factoring through the projective-injectives G_phi P_z
    /// for z over the window.
    ///
    /// mod-t^N commuting admits top-coefficient artifacts (morphisms whose
    /// commutator vanishes only by truncation), so both spaces are compared
    /// through degree N-2. Since t * Hom factors through
    /// projective-injectives, every stable class is visible there, and the
    /// result is independent of N for N >= 2.
    pub fn stable_hom_oracle(&self, x: &Arc, y: &Arc) -> Result<u32> {
        let ctx = self.twisted();
        let ex = self.mf_object(x)?;
        let ey = self.mf_object(y)?;
        let keep = self.ring.precision() - 1;
        let project = |v: Vec<u32>| -> Vec<u32> {
            let n = self.ring.precision();
            v.chunks(n).flat_map(|ch| ch[..keep].to_vec()).collect()
        };
        let hom: Vec<Vec<u32>> = hom_space_basis(&ctx.lin, &ex, &ey)?
            .into_iter()
            .map(&project)
            .collect();
        let mut factoring: Vec<Vec<u32>> = Vec::new();
        for z in self.poset.elements() {
            if self.phi.apply(self.poset, z).is_err() {
                continue;
            }
            let g = mf::make_gphi(&ctx, &crate::linear::PObject::single(z))?;
            let to_g = hom_space_basis(&ctx.lin, &ex, &g)?;
            let from_g = hom_space_basis(&ctx.lin, &g, &ey)?;
            for h in &to_g {
                let hm = morphism_from_vec(&ctx.lin, &ex.object, &g.object, h);
                for gmv in &from_g {
                    let gm = morphism_from_vec(&ctx.lin, &g.object, &ey.object, gmv);
                    let comp = ctx.lin.compose_trunc(&gm, &hm)?;
                    factoring.push(project(vec_from_morphism(&ctx.lin, &comp)));
                }
            }
        }
        let p = self.ring.prime() as u64;
        let total = rank_fp(&hom, p);
        let fact_rank = rank_fp(&factoring, p);
        let mut all = factoring;
        all.extend(hom.iter().cloned());
        if rank_fp(&all, p) != total {
            return Err(Error::InvalidObject(
                "internal: factoring space not contained in Hom".into(),
            ));
        }
        Ok((total - fact_rank) as u32)
    }

    /// X[k]: the shift acts on endpoint pairs by predecessors (k > 0) or
    /// successors (k < 0); in this 2-Calabi-Yau setting tau = [1].
    pub fn shift(&self, x: &Arc, k: i64) -> Result<Arc> {
        let mut a = x.x0;
        let mut b = x.x1;
        let steps = k.unsigned_abs();
        for _ in 0..steps {
            if k > 0 {
                a = self.poset.predecessor(a)?;
                b = self.poset.predecessor(b)?;
            } else {
                a = self.poset.successor(a)?;
                b = self.poset.successor(b)?;
            }
        }
        self.arc(a, b)
    }

    pub fn tau(&self, x: &Arc) -> Result<Arc> {
        self.shift(x, 1)
    }

    /// X crosses Y: liftings with x0 < y0 < x1 < y1 < sigma x0.
    pub fn crosses(&self, x: &Arc, y: &Arc) -> Result<bool> {
        let p = self.poset;
        let x0 = cov(x.x0, 0);
        let x1 = cov(x.x1, 0);
        let sx0 = cov(x.x0, 1);
        for (u, v) in [(y.x0, y.x1), (y.x1, y.x0)] {
            // minimal lift of u strictly above x0
            let mut ju = p.b(x.x0, u)?;
            if p.covering_equiv(cov(u, ju), x0)? {
                ju += 1;
            }
            let cu = cov(u, ju);
            if !p.covering_lt(x0, cu)? || !p.covering_lt(cu, x1)? {
                continue;
            }
            let mut jv = x1.level + p.b(x.x1, v)?;
            if p.covering_equiv(cov(v, jv), x1)? {
                jv += 1;
            }
            let cv = cov(v, jv);
            if p.covering_lt(x1, cv)? && p.covering_lt(cv, sx0)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// dim Ext^k(X, Y) = dim Hom(X, Y[k]).
    pub fn ext_dim(&self, x: &Arc, y: &Arc, k: i64) -> Result<u32> {
        let shifted = self.shift(y, k)?;
        self.stable_hom_dim(x, &shifted)
    }

    /// Ext^1-compatibility in both directions, equivalently noncrossing.
    pub fn compatible(&self, x: &Arc, y: &Arc) -> Result<bool> {
        Ok(!self.crosses(x, y)? && !self.crosses(y, x)?)
    }

    /// The almost split triangle tau X -> E(x-,y) + E(x,y-) -> X = E(x,y).
    pub fn almost_split(&self, x: &Arc) -> Result<AlmostSplit> {
        if self.is_proj_inj(x)? {
            return Err(Error::InvalidObject(
                "projective-injectives have no almost split triangle stably".into(),
            ));
        }
        let tau_x = self.tau(x)?;
        let mut middle = Vec::new();
        let mut middle_dropped = Vec::new();
        for (a, b) in [
            (self.poset.predecessor(x.x0)?, x.x1),
            (x.x0, self.poset.predecessor(x.x1)?),
        ] {
            if self.poset.equivalent(a, b)? {
                middle_dropped.push((a, b));
                continue;
            }
            let arc = self.arc(a, b)?;
            if self.is_proj_inj(&arc)? {
                middle_dropped.push((a, b));
            } else {
                middle.push(arc);
            }
        }
        Ok(AlmostSplit {
            tau_x,
            middle,
            middle_dropped,
            x: *x,
        })
    }

    /// A nonzero stable morphism A -> X factors through S iff liftings
    /// satisfy a0 <= s0 <= x0-slot and a1 <= s1 <= x1-slot, for lift
    /// witnesses of the nonzero morphism.
    pub fn factors_through(&self, a: &Arc, s: &Arc, x: &Arc) -> Result<bool> {
        let p = self.poset;
        let a0 = cov(a.x0, 0);
        let a1 = cov(a.x1, 0);
        for (u, v) in [(x.x0, x.x1), (x.x1, x.x0)] {
            let Some((cu, cv)) = self.hom_witness(a0, a1, u, v)? else {
                continue;
            };
            for (s0, s1) in [(s.x0, s.x1), (s.x1, s.x0)] {
                // lift of s0 in [a0, cu], lift of s1 in [a1, cv]
                let j0 = a0.level + p.b(a.x0, s0)?;
                let j1 = a1.level + p.b(a.x1, s1)?;
                if p.covering_leq(cov(s0, j0), cu)? && p.covering_leq(cov(s1, j1), cv)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// All maximal pairwise-compatible sets of arcs over the window.
    pub fn enumerate_clusters(&self) -> Result<Vec<Cluster>> {
        let arcs = self.all_arcs()?;
        let n = arcs.len();
        let mut compat = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                compat[i][j] = i == j || self.compatible(&arcs[i], &arcs[j])?;
            }
        }
        let mut out = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        // enumerate maximal cliques by extension with canonical ordering
        fn extend(
            start: usize,
            n: usize,
            compat: &[Vec<bool>],
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let mut extended = false;
            for cand in 0..n {
                if current.contains(&cand) {
                    continue;
                }
                if current.iter().all(|&c| compat[c][cand]) {
                    extended = true;
                    if cand >= start {
                        current.push(cand);
                        extend(cand + 1, n, compat, current, out);
                        current.pop();
                    }
                }
            }
            if !extended {
                out.push(current.clone());
            }
        }
        let mut raw = Vec::new();
        extend(0, n, &compat, &mut current, &mut raw);
        raw.sort();
        raw.dedup();
        for idxs in raw {
            out.push(Cluster::new(idxs.iter().map(|&i| arcs[i]).collect()));
        }
        out.sort_by(|a, b| a.arcs.cmp(&b.arcs));
        out.dedup();
        Ok(out)
    }

    /// Is the set pairwise compatible and maximal within the window?
    pub fn is_cluster(&self, c: &Cluster) -> Result<bool> {
        for (i, a) in c.arcs.iter().enumerate() {
            for b in &c.arcs[i + 1..] {
                if !self.compatible(a, b)? {
                    return Ok(false);
                }
            }
        }
        for cand in self.all_arcs()? {
            if c.contains(&cand) {
                continue;
            }
            let ok = c
                .arcs
                .iter()
                .map(|a| self.compatible(a, &cand))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            if ok {
                return Ok(false); // extendable: not maximal
            }
        }
        Ok(true)
    }

    /// Elements strictly between x and y in the cyclic order.
    fn strictly_between(&self, x: Elem, y: Elem) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for z in self.poset.elements() {
            if self.poset.equivalent(z, x)? || self.poset.equivalent(z, y)? {
                continue;
            }
            if self.poset.cyclic_order_triple(x, z, y)? {
                out.push(z);
            }
        }
        Ok(out)
    }

    /// The exchange partner: the unique a in (x,y) and b in (y, sigma x)
    /// with E(x,a), E(a,y), E(y,b), E(b,x) each in the cluster or
    /// projective-injective; T* = E(a,b).
    pub fn mutate(&self, t: &Arc, c: &Cluster) -> Result<Mutation> {
        if !c.contains(t) {
            return Err(Error::NotInCluster(format!("({},{})", t.x0, t.x1)));
        }
        let in_c_or_pi = |u: Elem, v: Elem| -> Result<bool> {
            if self.poset.equivalent(u, v)? {
                return Ok(false);
            }
            let arc = self.arc(u, v)?;
            Ok(self.is_proj_inj(&arc)? || c.contains(&arc))
        };
        let (x, y) = (t.x0, t.x1);
        let mut a_found = Vec::new();
        for z in self.strictly_between(x, y)? {
            if in_c_or_pi(x, z)? && in_c_or_pi(z, y)? {
                a_found.push(z);
            }
        }
        let mut b_found = Vec::new();
        for z in self.strictly_between(y, x)? {
            if in_c_or_pi(y, z)? && in_c_or_pi(z, x)? {
                b_found.push(z);
            }
        }
        if a_found.len() != 1 || b_found.len() != 1 {
            return Err(Error::InvalidObject(format!(
                "exchange witnesses not unique: a = {a_found:?}, b = {b_found:?}"
            )));
        }
        let (a, b) = (a_found[0], b_found[0]);
        Ok(Mutation {
            t_star: self.arc(a, b)?,
            a,
            b,
        })
    }

    /// The two exchange conflations
    /// T -> E(x,b) + E(a,y) -> T*   and   T* -> E(a,x') + E(y,b) -> T,
    /// certified exact in MF_phi.
    pub fn exchange_triangles(&self, t: &Arc, c: &Cluster) -> Result<(Conflation, Conflation)> {
        let m = self.mutate(t, c)?;
        let lin = self.lin();
        let (x, y, a, b) = (t.x0, t.x1, m.a, m.b);
        let first = build_exchange(&lin, x, y, a, b)?;
        // second triangle: T* = E(a,b) -> E(a, sigma x) + E(y, b) -> sigma T,
        // realized unstably as E(a,b) -> E(a,x) + E(y,b) -> E(y,x)-twisted;
        // combinatorially it is the first triangle for T* with witnesses
        // (y, sigma x).
        let second = build_exchange(&lin, a, b, y, x)?;
        Ok((first, second))
    }

    /// Quiver of a cluster from the triangles of its angulation: in a
    /// triangle u < v < w the arrows run (u,v) -> (u,w) -> (v,w) -> (u,v),
    /// keeping only sides that are cluster arcs.
    pub fn quiver(&self, c: &Cluster) -> Result<ClusterQuiver> {
        let vertices = c.arcs.clone();
        let n = vertices.len();
        let mut arrows = vec![vec![0u32; n]; n];
        let vid: HashMap<Arc, usize> = vertices.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        for (u, v, w) in self.triangles(c)? {
            let sides = [(u, v), (u, w), (v, w)];
            let cycle = [(0usize, 1usize), (1, 2), (2, 0)];
            for &(si, sj) in &cycle {
                let from = self.arc_opt(sides[si].0, sides[si].1)?;
                let to = self.arc_opt(sides[sj].0, sides[sj].1)?;
                if let (Some(f), Some(tt)) = (from, to) {
                    if let (Some(&fi), Some(&ti)) = (vid.get(&f), vid.get(&tt)) {
                        arrows[fi][ti] += 1;
                    }
                }
            }
        }
        Ok(ClusterQuiver { vertices, arrows })
    }

    fn arc_opt(&self, u: Elem, v: Elem) -> Result<Option<Arc>> {
        if self.poset.equivalent(u, v)? {
            return Ok(None);
        }
        let arc = self.arc(u, v)?;
        if self.is_proj_inj(&arc)? {
            Ok(None)
        } else {
            Ok(Some(arc))
        }
    }

    /// Triangles of the angulation defined by a cluster over Z_n (faces of
    /// the noncrossing chord set), as element triples in cyclic position
    /// order.
    fn triangles(&self, c: &Cluster) -> Result<Vec<(Elem, Elem, Elem)>> {
        let elems = self.poset.elements();
        let pos: HashMap<i64, usize> = elems.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        let chords: Vec<(usize, usize)> = c
            .arcs
            .iter()
            .map(|a| {
                let (mut i, mut j) = (pos[&a.x0.0], pos[&a.x1.0]);
                if i > j {
                    std::mem::swap(&mut i, &mut j);
                }
                (i, j)
            })
            .collect();
        let faces = crate::mcluster::polygon_faces(elems.len(), &chords);
        let mut out = Vec::new();
        for f in faces {
            if f.len() == 3 {
                out.push((elems[f[0]], elems[f[1]], elems[f[2]]));
            } else if f.len() != 3 {
                // clusters over Z_n triangulate; other faces mean the input
                // was not a cluster
                if f.len() > 3 {
                    return Err(Error::NotMaximal(format!("face with {} sides", f.len())));
                }
            }
        }
        Ok(out)
    }

    /// Fomin-Zelevinsky mutation of a quiver at a vertex.
    pub fn fz_mutate(&self, q: &ClusterQuiver, at: &Arc) -> Result<ClusterQuiver> {
        let Some(k) = q.vertices.iter().position(|v| v == at) else {
            return Err(Error::NotInCluster(format!("({},{})", at.x0, at.x1)));
        };
        let n = q.vertices.len();
        // signed exchange matrix
        let mut bmat = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                bmat[i][j] = q.arrows[i][j] as i64 - q.arrows[j][i] as i64;
            }
        }
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == k || j == k {
                    out[i][j] = -bmat[i][j];
                } else {
                    out[i][j] = bmat[i][j]
                        + (bmat[i][k].abs() * bmat[k][j] + bmat[i][k] * bmat[k][j].abs()) / 2;
                }
            }
        }
        let mut arrows = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                if out[i][j] > 0 {
                    arrows[i][j] = out[i][j] as u32;
                }
            }
        }
        Ok(ClusterQuiver {
            vertices: q.vertices.clone(),
            arrows,
        })
    }
}

/// Build the exchange conflation E(x,y) -> E(x,b) + E(a,y) -> E(a,b).
fn build_exchange(lin: &LinCtx, x: Elem, y: Elem, a: Elem, b: Elem) -> Result<Conflation> {
    let t = mf::make_e(lin, &EDescriptor::plain(x, y))?;
    let m1 = mf::make_e(lin, &EDescriptor::plain(x, b))?;
    let m2 = mf::make_e(lin, &EDescriptor::plain(a, y))?;
    let tstar = mf::make_e(lin, &EDescriptor::plain(a, b))?;
    let mid = MFObject {
        object: m1.object.direct_sum(&m2.object),
        d: lin.direct_sum(&m1.d, &m2.d),
    };
    let i1 = even_map(lin, &t, &m1)?;
    let i2 = even_map(lin, &t, &m2)?;
    let p1 = even_map(lin, &m1, &tstar)?;
    let p2 = even_map(lin, &m2, &tstar)?;
    // stack i = (i1; i2), adjust signs so p . i = 0
    let q1 = lin.compose_trunc(&p1, &i1)?;
    let q2 = lin.compose_trunc(&p2, &i2)?;
    // q1, q2 are diagonal scalar multiples of the same even generator;
    // solve alpha q1 + beta q2 = 0 with (alpha, beta) units
    let ring = lin.ring;
    let (alpha, beta) = exchange_signs(&ring, &q1, &q2)?;
    let mut imap = lin.zero_morphism(t.object.clone(), mid.object.clone());
    for r in 0..2 {
        for c in 0..2 {
            *imap.entry_mut(r, c) = i1.entry(r, c).clone();
            *imap.entry_mut(2 + r, c) = i2.entry(r, c).clone();
        }
    }
    let mut pmap = lin.zero_morphism(mid.object.clone(), tstar.object.clone());
    let p1s = lin.scale(&p1, &alpha);
    let p2s = lin.scale(&p2, &beta);
    for r in 0..2 {
        for c in 0..2 {
            *pmap.entry_mut(r, c) = p1s.entry(r, c).clone();
            *pmap.entry_mut(r, 2 + c) = p2s.entry(r, c).clone();
        }
    }
    mf::conflation(lin, &t, &mid, &tstar, &imap, &pmap)
}

/// Scalars (alpha, beta) with alpha q1 + beta q2 = 0 and minimal common
/// valuation, so the scaled projection stays split epi. The composites are
/// proportional multiples of the same even generator.
pub fn exchange_signs(
    ring: &crate::scalar::ScalarRing,
    q1: &PMorphism,
    q2: &PMorphism,
) -> Result<(crate::scalar::Scalar, crate::scalar::Scalar)> {
    let pick = |m: &PMorphism| {
        if !m.entry(0, 0).is_zero() {
            m.entry(0, 0).clone()
        } else {
            m.entry(1, 1).clone()
        }
    };
    let s1 = pick(q1);
    let s2 = pick(q2);
    if s1.is_zero() || s2.is_zero() {
        return Ok((ring.one(), ring.one()));
    }
    let g = s1.valuation().unwrap().min(s2.valuation().unwrap());
    let tg = ring.t_pow(g);
    Ok((
        ring.div_exact(&s2, &tg)?,
        ring.neg(&ring.div_exact(&s1, &tg)?),
    ))
}

/// The canonical even morphism between two 2-summand MF objects aligned
/// positionally (summand 0 -> summand 0, 1 -> 1): the diagonal map with
/// minimal t-powers commuting with the differentials.
pub fn even_map(lin: &LinCtx, from: &MFObject, to: &MFObject) -> Result<PMorphism> {
    let ring = lin.ring;
    for lead in 0..ring.precision() {
        // try g0 = t^lead, solve for g1 from the two commuting equations
        let mut sys = crate::linear::RLinearSystem::new(ring, 2);
        // unknowns: g0, g1; equations from (to.d) g = g (from.d) on the
        // counterdiagonal entries
        let (s10, s01) = (from.d.entry(1, 0), from.d.entry(0, 1));
        let (u10, u01) = (to.d.entry(1, 0), to.d.entry(0, 1));
        let (fx, fy) = (from.object.summands[0], from.object.summands[1]);
        let (tx, ty) = (to.object.summands[0], to.object.summands[1]);
        // entry (1,0): u10 * g0 * t^{c(fx,tx,ty)} = g1 * s10 * t^{c(fx,fy,ty)}
        let c1 = lin.poset.cocycle(fx, tx, ty)? as usize;
        let c2 = lin.poset.cocycle(fx, fy, ty)? as usize;
        let lhs1 = ring.shift_up(u10, c1).unwrap_or_else(|_| ring.zero());
        let rhs1 = ring.shift_up(s10, c2).unwrap_or_else(|_| ring.zero());
        sys.equation(vec![(0, lhs1), (1, ring.neg(&rhs1))], ring.zero());
        // entry (0,1): u01 * g1 * t^{c(fy,ty,tx)} = g0 * s01 * t^{c(fy,fx,tx)}
        let c3 = lin.poset.cocycle(fy, ty, tx)? as usize;
        let c4 = lin.poset.cocycle(fy, fx, tx)? as usize;
        let lhs2 = ring.shift_up(u01, c3).unwrap_or_else(|_| ring.zero());
        let rhs2 = ring.shift_up(s01, c4).unwrap_or_else(|_| ring.zero());
        sys.equation(vec![(1, lhs2), (0, ring.neg(&rhs2))], ring.zero());
        // pin g0
        sys.equation(vec![(0, ring.one())], ring.t_pow(lead));
        if let Some(sol) = sys.solve() {
            let mut g = lin.zero_morphism(from.object.clone(), to.object.clone());
            *g.entry_mut(0, 0) = sol[0].clone();
            *g.entry_mut(1, 1) = sol[1].clone();
            return Ok(g);
        }
    }
    Err(Error::InvalidObject(
        "no even morphism with the positional alignment".into(),
    ))
}

/// Basis (as flat F_p coefficient vectors) of the space of morphisms
/// A -> B commuting with the differentials.
pub fn hom_space_basis(lin: &LinCtx, a: &MFObject, b: &MFObject) -> Result<Vec<Vec<u32>>> {
    let n = lin.ring.precision();
    let p = lin.ring.prime() as u64;
    let rows_len = b.object.len() * a.object.len();
    let dim = rows_len * n;
    // constraint matrix: for each basis unknown, compute f d_A - d_B f
    let mut cols: Vec<Vec<u32>> = Vec::with_capacity(dim);
    for slot in 0..rows_len {
        for coeff in 0..n {
            let mut f = lin.zero_morphism(a.object.clone(), b.object.clone());
            let mut c = vec![0i64; n];
            c[coeff] = 1;
            f.entries[slot] = lin.ring.from_coeffs(&c);
            let lhs = lin.compose_trunc(&f, &a.d)?;
            let rhs = lin.compose_trunc(&b.d, &f)?;
            let diff = lin.sub(&lhs, &rhs)?;
            cols.push(vec_from_morphism(lin, &diff));
        }
    }
    // kernel of the (constraints x unknowns) matrix
    let constraints = cols.first().map(|c| c.len()).unwrap_or(0);
    let mut mat = vec![vec![0u32; dim]; constraints];
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            mat[i][j] = v;
        }
    }
    Ok(kernel_fp(&mat, dim, p))
}

pub fn morphism_from_vec(
    lin: &LinCtx,
    source: &crate::linear::PObject,
    target: &crate::linear::PObject,
    v: &[u32],
) -> PMorphism {
    let n = lin.ring.precision();
    let mut f = lin.zero_morphism(source.clone(), target.clone());
    for slot in 0..source.len() * target.len() {
        let coeffs: Vec<i64> = (0..n).map(|k| v[slot * n + k] as i64).collect();
        f.entries[slot] = lin.ring.from_coeffs(&coeffs);
    }
    f
}

pub fn vec_from_morphism(lin: &LinCtx, f: &PMorphism) -> Vec<u32> {
    let n = lin.ring.precision();
    let mut out = Vec::with_capacity(f.entries.len() * n);
    for e in &f.entries {
        for k in 0..n {
            out.push(lin.ring.coeff(e, k));
        }
    }
    out
}

/// Rank of a set of F_p vectors.
pub fn rank_fp(vectors: &[Vec<u32>], p: u64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols = vectors[0].len();
    let mut rows: Vec<Vec<u32>> = vectors.to_vec();
    let mut rank = 0;
    let mut pivot_col = 0;
    while pivot_col < cols && rank < rows.len() {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][pivot_col] != 0) else {
            pivot_col += 1;
            continue;
        };
        rows.swap(rank, pr);
        let inv = mod_inv(rows[rank][pivot_col] as u64, p);
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][pivot_col] != 0 {
                let f = rows[r][pivot_col] as u64;
                for cc in 0..cols {
                    rows[r][cc] =
                        ((rows[r][cc] as u64 + (p - f) * rows[rank][cc] as u64) % p) as u32;
                }
            }
        }
        rank += 1;
        pivot_col += 1;
    }
    rank
}

/// Kernel basis of a matrix over F_p (rows = constraints, cols = unknowns).
pub fn kernel_fp(mat: &[Vec<u32>], cols: usize, p: u64) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = mat.to_vec();
    let rows = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = mod_inv(m[r][c] as u64, p);
        for x in m[r].iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] as u64;
                for j in 0..cols {
                    m[i][j] = ((m[i][j] as u64 + (p - f) * m[r][j] as u64) % p) as u32;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for c in 0..cols {
            if let Some(pr) = pivot_of_col[c] {
                // pivot var = -sum free contributions
                let coeff = m[pr][free] as u64;
                if coeff != 0 {
                    v[c] = ((p - coeff) % p) as u32;
                }
            }
        }
        basis.push(v);
    }
    basis
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Fault kinds for the verification harness self-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectFault {
    None,
    Crossing,
}

/// Report of the cluster-structure axioms over Z_n.
#[derive(Debug, Default, Serialize)]
pub struct AxiomReport {
    pub n: i64,
    pub clusters: usize,
    pub unique_exchange: bool,
    pub triangles_exact: bool,
    pub no_loops_or_two_cycles: bool,
    pub fz_mutation: bool,
    pub iso_closure: bool,
    pub cy_symmetry: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the cluster-structure axioms and 2-CY dimension symmetry for
/// C_phi(Z_n). A fault injection corrupts the compatibility data to prove
/// the harness catches it.
pub fn verify_cluster_axioms(n: i64, fault: InjectFault) -> Result<AxiomReport> {
    let poset = CyclicPoset::zn(n)?;
    let ctx = StableCtx::new(&poset)?;
    let mut report = AxiomReport {
        n,
        ..Default::default()
    };
    let clusters = ctx.enumerate_clusters()?;
    report.clusters = clusters.len();
    report.unique_exchange = true;
    report.triangles_exact = true;
    report.no_loops_or_two_cycles = true;
    report.fz_mutation = true;
    report.iso_closure = true; // canonical arc form: isomorphic = equal
    report.cy_symmetry = true;

    let all = ctx.all_arcs()?;
    for (xi, x) in all.iter().enumerate() {
        for y in &all[xi..] {
            if ctx.ext_dim(x, y, 1)? != ctx.ext_dim(y, x, 1)? {
                report.cy_symmetry = false;
                report
                    .failures
                    .push(format!("2-CY symmetry fails at {x:?}, {y:?}"));
            }
        }
    }

    for c in &clusters {
        let mut c = c.clone();
        if fault == InjectFault::Crossing && c.arcs.len() >= 2 {
            // replace the last arc with one crossing the first
            let first = c.arcs[0];
            if let (Ok(s0), Ok(s1)) = (ctx.poset.successor(first.x0), ctx.poset.successor(first.x1))
            {
                if !ctx.poset.equivalent(s0, s1)? {
                    let crossing = ctx.arc(s0, s1)?;
                    if !ctx.is_proj_inj(&crossing)? {
                        let last = c.arcs.len() - 1;
                        c.arcs[last] = crossing;
                        c.arcs.sort();
                        c.arcs.dedup();
                    }
                }
            }
        }
        // compatibility within the (possibly corrupted) cluster
        for (i, a) in c.arcs.iter().enumerate() {
            for b in &c.arcs[i + 1..] {
                if !ctx.compatible(a, b)? {
                    report
                        .failures
                        .push(format!("incompatible pair {a:?}, {b:?} in cluster"));
                }
            }
        }
        if !report.failures.is_empty() && fault != InjectFault::None {
            // fault detected; stop early
            return Ok(report);
        }
        let q = ctx.quiver(&c)?;
        for (i, row) in q.arrows.iter().enumerate() {
            if row[i] != 0 {
                report.no_loops_or_two_cycles = false;
                report.failures.push(format!("loop at {:?}", q.vertices[i]));
            }
            for (j, &m) in row.iter().enumerate() {
                if i != j && m > 0 && q.arrows[j][i] > 0 {
                    report.no_loops_or_two_cycles = false;
                    report.failures.push(format!(
                        "2-cycle between {:?} and {:?}",
                        q.vertices[i], q.vertices[j]
                    ));
                }
            }
        }
        for t in c.arcs.clone() {
            // (a) unique exchange partner, cross-checked by brute force
            let m = match ctx.mutate(&t, &c) {
                Ok(m) => m,
                Err(e) => {
                    report.unique_exchange = false;
                    report.failures.push(format!("mutate failed at {t:?}: {e}"));
                    continue;
                }
            };
            let mutated = c.replace(&t, m.t_star);
            if !ctx.is_cluster(&mutated)? {
                report.unique_exchange = false;
                report
                    .failures
                    .push(format!("mutation of {t:?} is not a cluster"));
            }
            let mut replacements = 0;
            for cand in &all {
                if *cand == t {
                    continue;
                }
                let trial = c.replace(&t, *cand);
                if trial.arcs.len() == c.arcs.len() && ctx.is_cluster(&trial)? {
                    replacements += 1;
                }
            }
            if replacements != 1 {
                report.unique_exchange = false;
                report
                    .failures
                    .push(format!("{replacements} exchange partners for {t:?}"));
            }
            // involution
            let back = ctx.mutate(&m.t_star, &mutated)?;
            if back.t_star != t {
                report.unique_exchange = false;
                report
                    .failures
                    .push(format!("mutation not involutive at {t:?}"));
            }
            // (b) exchange triangles certify
            if let Err(e) = ctx.exchange_triangles(&t, &c) {
                report.triangles_exact = false;
                report
                    .failures
                    .push(format!("exchange triangle failed at {t:?}: {e}"));
            }
            // (d) FZ mutation matches the mutated cluster's quiver
            let fz = ctx.fz_mutate(&q, &t)?;
            let qm = ctx.quiver(&mutated)?;
            // align: fz inherits the old vertex order with t in place of t*
            let relabeled: Vec<Arc> = fz
                .vertices
                .iter()
                .map(|v| if *v == t { m.t_star } else { *v })
                .collect();
            let mut perm: Vec<usize> = (0..relabeled.len()).collect();
            perm.sort_by_key(|&i| relabeled[i]);
            let sorted: Vec<Arc> = perm.iter().map(|&i| relabeled[i]).collect();
            if sorted != qm.vertices {
                report.fz_mutation = false;
                report.failures.push(format!("FZ vertex mismatch at {t:?}"));
                continue;
            }
            let nq = relabeled.len();
            let mut ok = true;
            for i in 0..nq {
                for j in 0..nq {
                    if fz.arrows[perm[i]][perm[j]] != qm.arrows[i][j] {
                        ok = false;
                    }
                }
            }
            if !ok {
                report.fz_mutation = false;
                report.failures.push(format!("FZ arrows mismatch at {t:?}"));
            }
        }
    }
    Ok(report)
}

/// The Figure-style zig-zag cluster over Z = Z x Z (lexicographic) within a
/// window, together with AR-component labels.
#[derive(Debug, Clone, Serialize)]
pub struct ZigzagArc {
    pub arc: Arc,
    pub component: ComponentLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ComponentLabel {
    /// C_s: both endpoints in the same block s; type Z A-infinity.
    SameBlock(i64),
    /// C_{ab}: endpoints in distinct blocks; type Z A-infinity-infinity.
    CrossBlock(i64, i64),
}

impl ComponentLabel {
    pub fn ar_type(&self) -> &'static str {
        match self {
            ComponentLabel::SameBlock(_) => "ZA-inf",
            ComponentLabel::CrossBlock(_, _) => "ZA-inf-inf",
        }
    }
}

pub fn component_label(arc: &Arc) -> ComponentLabel {
    let (s0, _) = crate::poset::zxz_parts(arc.x0);
    let (s1, _) = crate::poset::zxz_parts(arc.x1);
    if s0 == s1 {
        ComponentLabel::SameBlock(s0)
    } else {
        ComponentLabel::CrossBlock(s0.min(s1), s0.max(s1))
    }
}

/// Build the zig-zag configuration restricted to the window |s|, |i| <= r:
/// one zig-zag per C_{s,s+1} component starting at its center point, plus a
/// zig-zag pattern of center points E((i,0),(j,0)).
pub fn build_zigzag(radius: i64) -> Result<Vec<ZigzagArc>> {
    if radius < 1 {
        return Err(Error::WindowTooSmall("zig-zag needs radius >= 1".into()));
    }
    let poset = CyclicPoset::zxz(-radius, radius, -radius, radius)?;
    let ctx = StableCtx::new(&poset)?;
    let mut arcs = Vec::new();
    let z = |s: i64, i: i64| crate::poset::zxz_elem(s, i);
    for s in -radius..radius {
        // zig-zag in C_{s,s+1}: start E((s,0),(s+1,0)), then alternately
        // add (1,0) to the first end and (0,-1) to the second
        let (mut i, mut j) = (0i64, 0i64);
        loop {
            if i > radius || -j > radius {
                break;
            }
            arcs.push(ctx.arc(z(s, i), z(s + 1, j))?);
            if arcs.len() % 2 == 1 {
                i += 1;
            } else {
                j -= 1;
            }
            if i > radius || j < -radius {
                break;
            }
        }
    }
    // center pattern: (0,2), (0,3), (-1,3), (-1,4), ... alternately raising
    // the second block and lowering the first
    let (mut a, mut b) = (0i64, 2i64);
    let mut step = 0;
    while a >= -radius && b <= radius {
        arcs.push(ctx.arc(z(a, 0), z(b, 0))?);
        if step % 2 == 0 {
            b += 1;
        } else {
            a -= 1;
        }
        step += 1;
    }
    arcs.sort();
    arcs.dedup();
    Ok(arcs
        .into_iter()
        .map(|arc| ZigzagArc {
            component: component_label(&arc),
            arc,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn_ctx(n: i64) -> (CyclicPoset, ()) {
        (CyclicPoset::zn(n).unwrap(), ())
    }

    #[test]
    fn stable_hom_examples_z6() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let e13 = ctx.arc(Elem(1), Elem(3)).unwrap();
        let e14 = ctx.arc(Elem(1), Elem(4)).unwrap();
        let e24 = ctx.arc(Elem(2), Elem(4)).unwrap();
        assert_eq!(ctx.stable_hom_dim(&e13, &e14).unwrap(), 1);
        assert_eq!(ctx.stable_hom_dim(&e13, &e24).unwrap(), 0);
        assert_eq!(ctx.stable_hom_dim(&e13, &e13).unwrap(), 1);
    }

    #[test]
    fn oracle_matches_lemma_on_z6() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let arcs = ctx.all_arcs().unwrap();
        assert_eq!(arcs.len(), 9); // 15 pairs - 6 projective-injectives
        for x in &arcs {
            for y in &arcs {
                let lemma = ctx.stable_hom_dim(x, y).unwrap();
                let oracle = ctx.stable_hom_oracle(x, y).unwrap();
                assert_eq!(lemma, oracle, "pair {x:?}, {y:?}");
            }
        }
    }

    #[test]
    fn hom_into_proj_inj_is_stably_zero() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let x = ctx.arc(Elem(1), Elem(3)).unwrap();
        let pi = Arc {
            x0: Elem(1),
            x1: Elem(2),
        };
        // oracle on the proj-inj target directly
        assert_eq!(ctx.stable_hom_oracle(&x, &pi).unwrap(), 0);
    }

    #[test]
    fn oracle_stabilizes_in_precision() {
        // documented: t * Hom factors through projective-injectives, so the
        // oracle value is the same for any N >= 2
        let (p, _) = zn_ctx(6);
        for n in [2usize, 3, 4, 6] {
            let mut ctx = StableCtx::new(&p).unwrap();
            ctx.ring = ScalarRing::new(101, n).unwrap();
            let a = ctx.arc(Elem(1), Elem(3)).unwrap();
            let b = ctx.arc(Elem(1), Elem(4)).unwrap();
            assert_eq!(ctx.stable_hom_oracle(&a, &a).unwrap(), 1, "N = {n}");
            assert_eq!(ctx.stable_hom_oracle(&a, &b).unwrap(), 1, "N = {n}");
        }
    }

    #[test]
    fn shift_and_tau() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let e13 = ctx.arc(Elem(1), Elem(3)).unwrap();
        // E(1,3)[1] = E(2,6)
        assert_eq!(
            ctx.shift(&e13, 1).unwrap(),
            ctx.arc(Elem(2), Elem(6)).unwrap()
        );
        assert_eq!(ctx.shift(&e13, 0).unwrap(), e13);
        assert_eq!(ctx.shift(&ctx.shift(&e13, 1).unwrap(), -1).unwrap(), e13);
        assert_eq!(ctx.tau(&e13).unwrap(), ctx.arc(Elem(6), Elem(2)).unwrap());
    }

    #[test]
    fn ext_and_crossing() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let x = ctx.arc(Elem(1), Elem(3)).unwrap();
        let y = ctx.arc(Elem(2), Elem(4)).unwrap();
        assert!(ctx.crosses(&x, &y).unwrap());
        assert_eq!(ctx.ext_dim(&x, &y, 1).unwrap(), 1);
        assert_eq!(ctx.ext_dim(&y, &x, 1).unwrap(), 1);
        assert_eq!(ctx.ext_dim(&x, &x, 1).unwrap(), 0);
        let z = ctx.arc(Elem(1), Elem(4)).unwrap();
        assert!(!ctx.crosses(&x, &z).unwrap());
        assert_eq!(ctx.ext_dim(&x, &z, 1).unwrap(), 0);
        assert_eq!(ctx.ext_dim(&z, &x, 1).unwrap(), 0);
        // ext_dim(X,Y,1) = 1 iff crosses(X,Y), over all pairs
        let arcs = ctx.all_arcs().unwrap();
        for a in &arcs {
            for b in &arcs {
                assert_eq!(
                    ctx.ext_dim(a, b, 1).unwrap() == 1,
                    ctx.crosses(a, b).unwrap(),
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let a = ctx.arc(Elem(1), Elem(3)).unwrap();
        let b = ctx.arc(Elem(3), Elem(5)).unwrap();
        let c = ctx.arc(Elem(2), Elem(4)).unwrap();
        assert!(ctx.compatible(&a, &b).unwrap());
        assert!(!ctx.compatible(&a, &c).unwrap());
        assert!(ctx.compatible(&a, &a).unwrap());
    }

    #[test]
    fn almost_split_triangles_z6() {
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        // X = E(2,4): tau X = E(1,3), middle = E(1,4) + E(2,3 dropped)
        let x = ctx.arc(Elem(2), Elem(4)).unwrap();
        let asx = ctx.almost_split(&x).unwrap();
        assert_eq!(asx.tau_x, ctx.arc(Elem(1), Elem(3)).unwrap());
        assert_eq!(asx.middle, vec![ctx.arc(Elem(1), Elem(4)).unwrap()]);
        assert_eq!(asx.middle_dropped, vec![(Elem(2), Elem(3))]);
        // X = E(1,3) = E(x, x^{++}): second form, middle E(6,3)
        let x13 = ctx.arc(Elem(1), Elem(3)).unwrap();
        let as13 = ctx.almost_split(&x13).unwrap();
        assert_eq!(as13.tau_x, ctx.arc(Elem(6), Elem(2)).unwrap());
        assert_eq!(as13.middle, vec![ctx.arc(Elem(6), Elem(3)).unwrap()]);
    }

    #[test]
    fn almost_split_factorization_exhaustive_z6() {
        // every nonzero non-isomorphism A -> X factors through the middle
        let (p, _) = zn_ctx(6);
        let ctx = StableCtx::new(&p).unwrap();
        let arcs = ctx.all_arcs().unwrap();
        for x in &arcs {
            let asx = ctx.almost_split(x).unwrap();
            for a in &arcs {
                if a == x || ctx.stable_hom_dim(a, x).unwrap() == 0 {
                    continue;
                }
                let ok = asx
                    .middle
                    .iter()
                    .any(|s| ctx.factors_through(a, s, x).unwrap());
                assert!(ok, "A = {a:?} does not factor through middle of {x:?}");
            }
        }
    }

    #[test]
    fn cluster_counts_are_catalan() {
        let expected = [(4i64, 2usize), (5, 5), (6, 14), (7, 42)];
        for (n, count) in expected {
            let p = CyclicPoset::zn(n).unwrap();
            let ctx = StableCtx::new(&p).unwrap();
            let clusters = ctx.enumerate_clusters().unwrap();
            assert_eq!(clusters.len(), count, "n = {n}");
            for c in &clusters {
                assert_eq!(c.arcs.len(), (n - 3) as usize);
                assert!(ctx.is_cluster(c).unwrap());
            }
        }
    }

    /// Independent oracle: enumerate triangulations of the convex n-gon as
    /// sets of noncrossing diagonals, by recursion on the ear of edge (1, n).
    fn triangulations(n: usize) -> Vec<Vec<(usize, usize)>> {
        fn rec(vertices: &[usize]) -> Vec<Vec<(usize, usize)>> {
            let k = vertices.len();
            if k < 3 {
                return vec![Vec::new()];
            }
            let (first, last) = (vertices[0], vertices[k - 1]);
            let mut out = Vec::new();
            for mid in 1..k - 1 {
                let apex = vertices[mid];
                let left = rec(&vertices[..=mid]);
                let right = rec(&vertices[mid..]);
                for l in &left {
                    for r in &right {
                        let mut tri = Vec::new();
                        // the two sides of the apex triangle that are diagonals
                        if mid > 1 {
                            tri.push((first.min(apex), first.max(apex)));
                        }
                        if mid < k - 2 {
                            tri.push((apex.min(last), apex.max(last)));
                        }
                        tri.extend_from_slice(l);
                        tri.extend_from_slice(r);
                        let mut tri: Vec<_> = tri;
                        tri.sort();
                        tri.dedup();
                        out.push(tri);
                    }
                }
            }
            out
        }
        let verts: Vec<usize> = (1..=n).collect();
        let mut all = rec(&verts);
        for t in &mut all {
            t.sort();
        }
        all.sort();
        all.dedup();
        all
    }

    #[test]
    fn clusters_are_triangulations() {
        for n in [4i64, 5, 6] {
            let p = CyclicPoset::zn(n).unwrap();
            let ctx = StableCtx::new(&p).unwrap();
            let clusters = ctx.enumerate_clusters().unwrap();
            let mut cluster_sets: Vec<Vec<(usize, usize)>> = clusters
                .iter()
                .map(|c| {
                    let mut v: Vec<(usize, usize)> = c
                        .arcs
                        .iter()
                        .map(|a| (a.x0.0 as usize, a.x1.0 as usize))
                        .collect();
                    v.sort();
                    v
                })
                .collect();
            cluster_sets.sort();
            let mut tri: Vec<Vec<(usize, usize)>> = triangulations(n as usize)
                .into_iter()
                .filter(|t| !t.is_empty() || n == 3)
                .collect();
            tri.sort();
            tri.dedup();
            assert_eq!(cluster_sets, tri, "n = {n}");
        }
    }

    #[test]
    fn mutation_fan_example() {
        let p = CyclicPoset::zn(6).unwrap();
        let ctx = StableCtx::new(&p).unwrap();
        let c = Cluster::new(vec![
            ctx.arc(Elem(1), Elem(3)).unwrap(),
            ctx.arc(Elem(1), Elem(4)).unwrap(),
            ctx.arc(Elem(1), Elem(5)).unwrap(),
        ]);
        let t = ctx.arc(Elem(1), Elem(4)).unwrap();
        let m = ctx.mutate(&t, &c).unwrap();
        assert_eq!(m.t_star, ctx.arc(Elem(3), Elem(5)).unwrap());
        // involution
        let c2 = c.replace(&t, m.t_star);
        let back = ctx.mutate(&m.t_star, &c2).unwrap();
        assert_eq!(back.t_star, t);
        // n = 4: mutation swaps the two diagonals
        let p4 = CyclicPoset::zn(4).unwrap();
        let ctx4 = StableCtx::new(&p4).unwrap();
        let d1 = ctx4.arc(Elem(1), Elem(3)).unwrap();
        let d2 = ctx4.arc(Elem(2), Elem(4)).unwrap();
        let c4 = Cluster::new(vec![d1]);
        assert_eq!(ctx4.mutate(&d1, &c4).unwrap().t_star, d2);
    }

    #[test]
    fn exchange_triangles_certify() {
        let p = CyclicPoset::zn(6).unwrap();
        let ctx = StableCtx::new(&p).unwrap();
        let c = Cluster::new(vec![
            ctx.arc(Elem(1), Elem(3)).unwrap(),
            ctx.arc(Elem(1), Elem(4)).unwrap(),
            ctx.arc(Elem(1), Elem(5)).unwrap(),
        ]);
        let t = ctx.arc(Elem(1), Elem(4)).unwrap();
        let (first, second) = ctx.exchange_triangles(&t, &c).unwrap();
        // middles are E(1,5) + E(3,4) per the quadrilateral (1,3,4,5)
        assert_eq!(
            first.b.object.summands,
            vec![Elem(1), Elem(5), Elem(3), Elem(4)]
        );
        let _ = second;
    }

    #[test]
    fn fan_quiver_is_a3_path() {
        let p = CyclicPoset::zn(6).unwrap();
        let ctx = StableCtx::new(&p).unwrap();
        let a13 = ctx.arc(Elem(1), Elem(3)).unwrap();
        let a14 = ctx.arc(Elem(1), Elem(4)).unwrap();
        let a15 = ctx.arc(Elem(1), Elem(5)).unwrap();
        let c = Cluster::new(vec![a13, a14, a15]);
        let q = ctx.quiver(&c).unwrap();
        let idx = |a: &Arc| q.vertices.iter().position(|v| v == a).unwrap();
        let total: u32 = q.arrows.iter().flatten().sum();
        assert_eq!(total, 2);
        assert_eq!(q.arrows[idx(&a13)][idx(&a14)], 1);
        assert_eq!(q.arrows[idx(&a14)][idx(&a15)], 1);
    }

    #[test]
    fn single_vertex_quiver_mutation() {
        let p = CyclicPoset::zn(4).unwrap();
        let ctx = StableCtx::new(&p).unwrap();
        let d1 = ctx.arc(Elem(1), Elem(3)).unwrap();
        let c = Cluster::new(vec![d1]);
        let q = ctx.quiver(&c).unwrap();
        let fz = ctx.fz_mutate(&q, &d1).unwrap();
        assert_eq!(q.arrows, fz.arrows);
    }

    #[test]
    fn axioms_hold_n5_n6() {
        for n in [5i64, 6] {
            let rep = verify_cluster_axioms(n, InjectFault::None).unwrap();
            assert!(rep.ok(), "n = {n}: {:?}", rep.failures);
        }
    }

    #[test]
    fn injected_crossing_is_caught() {
        let rep = verify_cluster_axioms(6, InjectFault::Crossing).unwrap();
        assert!(!rep.ok());
        assert!(rep.failures.iter().any(|f| f.contains("incompatible")));
    }

    #[test]
    fn zigzag_window_is_compatible() {
        let arcs = build_zigzag(3).unwrap();
        assert!(!arcs.is_empty());
        let poset = CyclicPoset::zxz(-3, 3, -3, 3).unwrap();
        let ctx = StableCtx::new(&poset).unwrap();
        for (i, za) in arcs.iter().enumerate() {
            for zb in &arcs[i + 1..] {
                assert!(
                    ctx.compatible(&za.arc, &zb.arc).unwrap(),
                    "{:?} vs {:?}",
                    za.arc,
                    zb.arc
                );
            }
        }
        // component labels
        let zx = |s: i64, i: i64| crate::poset::zxz_elem(s, i);
        let same = ctx.arc(zx(0, 1), zx(0, 3)).unwrap();
        assert_eq!(component_label(&same), ComponentLabel::SameBlock(0));
        assert_eq!(component_label(&same).ar_type(), "ZA-inf");
        let cross = ctx.arc(zx(0, 0), zx(1, -1)).unwrap();
        assert_eq!(component_label(&cross), ComponentLabel::CrossBlock(0, 1));
        assert_eq!(component_label(&cross).ar_type(), "ZA-inf-inf");
        // the zig-zag contains both kinds of components
        assert!(arcs
            .iter()
            .any(|a| matches!(a.component, ComponentLabel::CrossBlock(0, 1))));
        assert!(arcs
            .iter()
            .any(|a| matches!(a.component, ComponentLabel::CrossBlock(0, 2))));
    }
}
