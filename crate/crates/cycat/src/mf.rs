//! Matrix factorization categories MF(X) and MF_phi(X): objects (V, d)
//! with d^2 = t, the indecomposables E(x,y), projective-injectives G_phi P,
//! exactness certificates for conflations, and a Krull-Schmidt
//! decomposition algorithm.

use crate::error::{Error, Result};
use crate::linear::{LinCtx, PMorphism, PObject, RLinearSystem, TwistedCtx};
use crate::poset::{check_admissible, CyclicPoset, Elem};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// An object (V, d) with d^2 = t * id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MFObject {
    pub object: PObject,
    pub d: PMorphism,
}

/// Which leg of an equivalent pair carries the extra t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EVariant {
    Plain,
    Primed,
}

/// Names an indecomposable E(x,y) (or E(x,y)' when x ~ y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EDescriptor {
    pub x: Elem,
    pub y: Elem,
    pub variant: EVariant,
}

impl EDescriptor {
    pub fn plain(x: Elem, y: Elem) -> Self {
        EDescriptor {
            x,
            y,
            variant: EVariant::Plain,
        }
    }

    pub fn primed(x: Elem, y: Elem) -> Self {
        EDescriptor {
            x,
            y,
            variant: EVariant::Primed,
        }
    }

    /// Canonical form under E(x,y) ~ E(y,x) (with the variant toggled for
    /// equivalent endpoints): endpoints ordered by id.
    pub fn canonical(&self, poset: &CyclicPoset) -> Result<EDescriptor> {
        if self.x.0 <= self.y.0 {
            return Ok(*self);
        }
        let variant = if poset.equivalent(self.x, self.y)? {
            match self.variant {
                EVariant::Plain => EVariant::Primed,
                EVariant::Primed => EVariant::Plain,
            }
        } else {
            EVariant::Plain
        };
        Ok(EDescriptor {
            x: self.y,
            y: self.x,
            variant,
        })
    }
}

/// Build E(x,y): P_x + P_y with counterdiagonal d. For x ~ y the plain
/// variant puts the t on the y -> x leg, the primed variant on x -> y.
pub fn make_e(ctx: &LinCtx, desc: &EDescriptor) -> Result<MFObject> {
    let (x, y) = (desc.x, desc.y);
    let cxyx = ctx.poset.cocycle(x, y, x)?;
    let v = PObject::new(vec![x, y]);
    let mut d = ctx.zero_morphism(v.clone(), v.clone());
    if ctx.poset.equivalent(x, y)? {
        match desc.variant {
            EVariant::Plain => {
                *d.entry_mut(1, 0) = ctx.ring.one();
                *d.entry_mut(0, 1) = ctx.ring.t_pow(1);
            }
            EVariant::Primed => {
                *d.entry_mut(1, 0) = ctx.ring.t_pow(1);
                *d.entry_mut(0, 1) = ctx.ring.one();
            }
        }
    } else {
        if cxyx != 1 {
            return Err(Error::InvalidPair {
                x: x.0,
                y: y.0,
                reason: format!("c(x,y,x) = {cxyx} excludes d^2 = t"),
            });
        }
        if desc.variant == EVariant::Primed {
            return Err(Error::InvalidPair {
                x: x.0,
                y: y.0,
                reason: "primed variant requires equivalent endpoints".into(),
            });
        }
        *d.entry_mut(1, 0) = ctx.ring.one();
        *d.entry_mut(0, 1) = ctx.ring.one();
    }
    let obj = MFObject { object: v, d };
    debug_assert!(validate(ctx, &obj).is_ok());
    Ok(obj)
}

/// G_phi V = (V + phi V, counterdiag(xi, eta)): the projective-injective
/// objects of MF_phi(X).
pub fn make_gphi(ctx: &TwistedCtx, v: &PObject) -> Result<MFObject> {
    let fv = ctx.phi_object(v)?;
    let total = v.direct_sum(&fv);
    let eta = ctx.eta(v)?;
    let xi = ctx.xi(v)?;
    let mut d = ctx.lin.zero_morphism(total.clone(), total.clone());
    let n = v.len();
    for r in 0..n {
        for c in 0..n {
            *d.entry_mut(r, n + c) = xi.entry(r, c).clone();
            *d.entry_mut(n + r, c) = eta.entry(r, c).clone();
        }
    }
    Ok(MFObject { object: total, d })
}

/// Check d^2 = t * id exactly in k[t]/(t^N).
pub fn validate(ctx: &LinCtx, obj: &MFObject) -> Result<()> {
    if obj.d.source != obj.object || obj.d.target != obj.object {
        return Err(Error::InvalidObject(
            "d must be an endomorphism of V".into(),
        ));
    }
    let dd = ctx.compose_trunc(&obj.d, &obj.d)?;
    let t_id = ctx.scale(&ctx.identity(&obj.object), &ctx.ring.t_pow(1));
    if dd != t_id {
        return Err(Error::InvalidObject("d^2 != t * id".into()));
    }
    Ok(())
}

/// Validation for the twisted category: admissibility first, then
/// d^2 = t, then the per-entry factoring-through-eta divisibility.
pub fn validate_twisted(ctx: &TwistedCtx, obj: &MFObject) -> Result<()> {
    if !check_admissible(ctx.poset(), ctx.phi)? {
        return Err(Error::NotAdmissible(
            "underlying automorphism fails the covering chain".into(),
        ));
    }
    validate(&ctx.lin, obj)?;
    for row in 0..obj.object.len() {
        for col in 0..obj.object.len() {
            let entry = obj.d.entry(row, col);
            if entry.is_zero() {
                continue;
            }
            let e = ctx.eta_exponent(obj.object.summands[col], obj.object.summands[row])?;
            if (entry.valuation().unwrap() as i64) < e {
                return Err(Error::NotFactoring { row, col });
            }
        }
    }
    Ok(())
}

/// E(x,y) lies in MF_phi(X) iff (phi x, y, phi^{-1} x) is in cyclic order.
pub fn admitted_in_twisted(ctx: &TwistedCtx, x: Elem, y: Elem) -> Result<bool> {
    let p = ctx.poset();
    let fx = ctx.phi.apply(p, x)?;
    let fix = ctx.phi.inverse(p, x)?;
    p.cyclic_order_triple(fx, y, fix)
}

/// E(x,y) is projective-injective iff y ~ phi x or x ~ phi y.
pub fn is_proj_inj(ctx: &TwistedCtx, desc: &EDescriptor) -> Result<bool> {
    let p = ctx.poset();
    let fx = ctx.phi.apply(p, desc.x)?;
    let fy = ctx.phi.apply(p, desc.y)?;
    Ok(p.equivalent(desc.y, fx)? || p.equivalent(desc.x, fy)?)
}

/// Result of the Krull-Schmidt decomposition: the multiset of E summands
/// with the invertible base change U, its inverse, and the conjugated
/// counterdiagonal-block form U d U^{-1}.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summands: Vec<EDescriptor>,
    pub base_change: PMorphism,
    pub base_change_inv: PMorphism,
    pub conjugated: MFObject,
}

/// Ideal-model working matrix: entry (k,i) is scalar * t^{b(x_i, x_k)},
/// so composition is plain truncated multiplication with no twists.
struct IdealMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl IdealMatrix {
    fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.n + c] = v;
    }
}

/// Krull-Schmidt decomposition by pivoting on minimal-valuation entries in
/// the ideal model. Requires a cyclically ordered carrier; refuses others.
pub fn decompose(ctx: &LinCtx, obj: &MFObject) -> Result<Decomposition> {
    validate(ctx, obj)?;
    if !ctx.poset.is_cyclically_ordered()? {
        return Err(Error::NonCyclicOrder(
            "decomposition is only guaranteed for cyclically ordered carriers".into(),
        ));
    }
    // Entries are exact polynomials in k[t]/(t^N); the ideal model shifts
    // them by t^{b} with b <= 1, so run the elimination with one extra
    // degree of headroom and truncate back at the end.
    let ring = &crate::scalar::ScalarRing::new(ctx.ring.prime(), ctx.ring.precision() + 1)?;
    let lift = |s: &Scalar| -> Scalar {
        ring.from_coeffs(&s.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>())
    };
    let n = obj.object.len();
    let xs = obj.object.summands.clone();
    let b = |i: usize, j: usize| -> Result<i64> { ctx.poset.b(xs[i], xs[j]) };

    // Convert d to the ideal model.
    let mut o = IdealMatrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    for r in 0..n {
        for c in 0..n {
            let shift = b(c, r)? as usize;
            o.set(r, c, ring.shift_up(&lift(obj.d.entry(r, c)), shift)?);
        }
    }
    let mut u = IdealMatrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    let mut uinv = IdealMatrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    for i in 0..n {
        u.set(i, i, ring.one());
        uinv.set(i, i, ring.one());
    }

    // Conjugate by I + mu E_{k,l}: row_k += mu row_l, col_l -= col_k mu,
    // plus the second-order correction at (k,l). mu must be a legal
    // morphism P_{x_l} -> P_{x_k}: val(mu) >= b(x_l, x_k).
    let conj_add = |o: &mut IdealMatrix,
                    u: &mut IdealMatrix,
                    uinv: &mut IdealMatrix,
                    k: usize,
                    l: usize,
                    mu: &Scalar|
     -> Result<()> {
        let need = b(l, k)?;
        match mu.valuation() {
            None => return Ok(()),
            Some(v) if (v as i64) < need => {
                return Err(Error::InvalidObject(format!(
                    "internal: illegal clearing factor at ({k},{l})"
                )))
            }
            _ => {}
        }
        let row_l: Vec<Scalar> = (0..n).map(|j| o.at(l, j).clone()).collect();
        let col_k: Vec<Scalar> = (0..n).map(|i| o.at(i, k).clone()).collect();
        let cross = ring.mul(&ring.mul(mu, o.at(l, k)), mu);
        for j in 0..n {
            let v = ring.add(o.at(k, j), &ring.mul(mu, &row_l[j]));
            o.set(k, j, v);
        }
        for i in 0..n {
            let v = ring.sub(o.at(i, l), &ring.mul(&col_k[i], mu));
            o.set(i, l, v);
        }
        let v = ring.sub(o.at(k, l), &cross);
        o.set(k, l, v);
        // U <- (I + mu E) U;  U^{-1} <- U^{-1} (I - mu E)
        let urow_l: Vec<Scalar> = (0..n).map(|j| u.at(l, j).clone()).collect();
        for j in 0..n {
            let v = ring.add(u.at(k, j), &ring.mul(mu, &urow_l[j]));
            u.set(k, j, v);
        }
        let vcol_k: Vec<Scalar> = (0..n).map(|i| uinv.at(i, k).clone()).collect();
        for i in 0..n {
            let v = ring.sub(uinv.at(i, l), &ring.mul(&vcol_k[i], mu));
            uinv.set(i, l, v);
        }
        Ok(())
    };

    let mut active: Vec<bool> = vec![true; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    while active.iter().any(|&a| a) {
        // Pivot: among active off-diagonal valuation-0 entries pick the one
        // with preorder-minimal target, then preorder-maximal source within
        // its row, then lexicographic position. The order-aware tie-break
        // keeps every clearing factor expressible as a morphism.
        let mut cands = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if r != c && active[r] && active[c] && o.at(r, c).valuation() == Some(0) {
                    cands.push((r, c));
                }
            }
        }
        let Some(&first) = cands.first() else {
            return Err(Error::InvalidObject(
                "no unit-leading entry in the active block: object does not decompose".into(),
            ));
        };
        let mut k0 = first.0;
        for &(r, _) in &cands {
            if r == k0 {
                continue;
            }
            if b(r, k0)? == 0 && b(k0, r)? != 0 {
                k0 = r; // strictly smaller target class
            }
        }
        let mut i0: Option<usize> = None;
        for &(r, c) in &cands {
            if r != k0 {
                continue;
            }
            i0 = Some(match i0 {
                None => c,
                Some(best) => {
                    if b(best, c)? == 0 && b(c, best)? != 0 {
                        c // strictly larger source class
                    } else {
                        best
                    }
                }
            });
        }
        let i0 =
            i0.ok_or_else(|| Error::InvalidObject("internal: pivot row has no unit entry".into()))?;

        let pv = o.at(k0, i0).clone();
        // Clear column i0, then row k0, then the diagonal corner jointly.
        for k in 0..n {
            if k != k0 && active[k] && !o.at(k, i0).is_zero() {
                let mu = ring.neg(&ring.div_exact(o.at(k, i0), &pv)?);
                conj_add(&mut o, &mut u, &mut uinv, k, k0, &mu)?;
            }
        }
        for m in 0..n {
            if m != i0 && m != k0 && active[m] && !o.at(k0, m).is_zero() {
                let nu = ring.div_exact(o.at(k0, m), &pv)?;
                conj_add(&mut o, &mut u, &mut uinv, i0, m, &nu)?;
            }
        }
        if !o.at(k0, k0).is_zero() {
            let alpha = ring.div_exact(o.at(k0, k0), &pv)?;
            conj_add(&mut o, &mut u, &mut uinv, i0, k0, &alpha)?;
        }
        // d^2 = t forces the complementary row/column to vanish mod t^N;
        // the internal ring carries one extra degree where exact-polynomial
        // leftovers of the mod-t^N object equation live, so tolerate (and
        // drop) residues of valuation >= N.
        let pub_prec = ctx.ring.precision();
        let vanishes = |s: &Scalar| s.valuation().map(|v| v >= pub_prec).unwrap_or(true);
        for j in 0..n {
            if j != k0 {
                if !vanishes(o.at(i0, j)) {
                    return Err(Error::InvalidObject(format!(
                        "internal: residue at ({i0},{j}) after split"
                    )));
                }
                o.set(i0, j, ring.zero());
            }
            if j != i0 {
                if !vanishes(o.at(j, k0)) {
                    return Err(Error::InvalidObject(format!(
                        "internal: residue at ({j},{k0}) after split"
                    )));
                }
                o.set(j, k0, ring.zero());
            }
        }
        let q = o.at(i0, k0).clone();
        let prod = ring.mul(&pv, &q);
        let diff = ring.sub(&prod, &ring.t_pow(1));
        if !vanishes(&diff) {
            return Err(Error::InvalidObject(
                "internal: split block does not factor t".into(),
            ));
        }
        active[i0] = false;
        active[k0] = false;
        pairs.push((i0, k0));
    }

    // Permute summands so paired indices are adjacent: [i0, k0, i1, k1, ...].
    let mut order = Vec::with_capacity(n);
    for &(i, k) in &pairs {
        order.push(i);
        order.push(k);
    }
    let new_object = PObject::new(order.iter().map(|&i| xs[i]).collect());
    let mut pu = IdealMatrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    let mut puinv = IdealMatrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    for (newr, &oldr) in order.iter().enumerate() {
        for c in 0..n {
            pu.set(newr, c, u.at(oldr, c).clone());
        }
    }
    for r in 0..n {
        for (newc, &oldc) in order.iter().enumerate() {
            puinv.set(r, newc, uinv.at(r, oldc).clone());
        }
    }
    // Convert back from the ideal model, truncating to the public ring.
    let from_ideal = |mat: &IdealMatrix, source: &PObject, target: &PObject| -> Result<PMorphism> {
        let mut out = ctx.zero_morphism(source.clone(), target.clone());
        for r in 0..target.len() {
            for c in 0..source.len() {
                let v = mat.at(r, c);
                if v.is_zero() {
                    continue;
                }
                let shift = ctx.poset.b(source.summands[c], target.summands[r])? as usize;
                let q = ring.div_exact(v, &ring.t_pow(shift))?;
                *out.entry_mut(r, c) = ctx
                    .ring
                    .from_coeffs(&q.coeffs().iter().map(|&x| x as i64).collect::<Vec<_>>());
            }
        }
        Ok(out)
    };
    let base_change = from_ideal(&pu, &obj.object, &new_object)?;
    let base_change_inv = from_ideal(&puinv, &new_object, &obj.object)?;
    // The conjugated form is computed at ring level so the certificate
    // identity U d U^{-1} = conjugated.d holds exactly in k[t]/(t^N). When
    // the input's d^2 = t id holds only modulo t^N, off-block slots may
    // keep dust of valuation >= N-1; for exactly factoring inputs they are
    // zero. Meaningful coefficients are protected by the precondition
    // N > 2 * (max t-exponent in d) + 1.
    let conj_d = ctx.compose_trunc(&ctx.compose_trunc(&base_change, &obj.d)?, &base_change_inv)?;
    let dust_floor = ctx.ring.precision() - 1;
    for (bi, _) in pairs.iter().enumerate() {
        let r0 = 2 * bi;
        for r in r0..r0 + 2 {
            for c in 0..n {
                let inside = (r == r0 && c == r0 + 1) || (r == r0 + 1 && c == r0);
                if inside {
                    continue;
                }
                if let Some(v) = conj_d.entry(r, c).valuation() {
                    if v < dust_floor {
                        return Err(Error::InvalidObject(format!(
                            "internal: conjugated form not block at ({r},{c})"
                        )));
                    }
                }
            }
        }
    }
    let conjugated = MFObject {
        object: new_object,
        d: conj_d,
    };

    let mut summands = Vec::new();
    for &(i, k) in &pairs {
        // the unit leg runs x_i -> x_k: plain E(x_i, x_k), with the t on
        // the complementary leg, matching the paper's matrix when x ~ y
        summands.push(EDescriptor::plain(xs[i], xs[k]).canonical(ctx.poset)?);
    }
    summands.sort();
    Ok(Decomposition {
        summands,
        base_change,
        base_change_inv,
        conjugated,
    })
}

/// A certified conflation A >-> B ->> C: morphisms commute with d and the
/// underlying sequence is split exact in P(X), witnessed by explicit
/// splittings r: B -> A, s: C -> B.
#[derive(Debug, Clone)]
pub struct Conflation {
    pub a: MFObject,
    pub b: MFObject,
    pub c: MFObject,
    pub i: PMorphism,
    pub p: PMorphism,
    pub retraction: PMorphism,
    pub section: PMorphism,
}

/// Verify that (i, p) forms a conflation and produce the splitting
/// certificate; errors with a witness when the sequence is not exact.
pub fn conflation(
    ctx: &LinCtx,
    a: &MFObject,
    b: &MFObject,
    c: &MFObject,
    i: &PMorphism,
    p: &PMorphism,
) -> Result<Conflation> {
    if i.source != a.object || i.target != b.object {
        return Err(Error::DimensionMismatch("i must be A -> B".into()));
    }
    if p.source != b.object || p.target != c.object {
        return Err(Error::DimensionMismatch("p must be B -> C".into()));
    }
    if ctx.compose(i, &a.d)? != ctx.compose(&b.d, i)? {
        return Err(Error::NotExact("i does not commute with d".into()));
    }
    if ctx.compose(p, &b.d)? != ctx.compose(&c.d, p)? {
        return Err(Error::NotExact("p does not commute with d".into()));
    }
    if !ctx.compose(p, i)?.is_zero() {
        return Err(Error::NotExact("p . i != 0".into()));
    }
    if a.object.len() + c.object.len() != b.object.len() {
        return Err(Error::NotExact(format!(
            "ranks do not add: {} + {} != {}",
            a.object.len(),
            c.object.len(),
            b.object.len()
        )));
    }
    // Solve for r: B -> A and s: C -> B with r i = 1, p s = 1, i r + s p = 1.
    let (na, nb, nc) = (a.object.len(), b.object.len(), c.object.len());
    let r_vars = na * nb;
    let s_vars = nb * nc;
    let ring = ctx.ring;
    let mut sys = RLinearSystem::new(ring, r_vars + s_vars);
    let r_idx = |row: usize, col: usize| row * nb + col;
    let s_idx = |row: usize, col: usize| r_vars + row * nc + col;
    let tshift = |s: &Scalar, tw: usize| ring.shift_up(s, tw).unwrap_or_else(|_| ring.zero());
    // r i = id_A
    for ar in 0..na {
        for ac in 0..na {
            let mut terms = Vec::new();
            for j in 0..nb {
                let iv = i.entry(j, ac);
                if iv.is_zero() {
                    continue;
                }
                let tw = ctx.poset.cocycle(
                    a.object.summands[ac],
                    b.object.summands[j],
                    a.object.summands[ar],
                )? as usize;
                terms.push((r_idx(ar, j), tshift(iv, tw)));
            }
            let rhs = if ar == ac { ring.one() } else { ring.zero() };
            sys.equation(terms, rhs);
        }
    }
    // p s = id_C
    for cr in 0..nc {
        for cc in 0..nc {
            let mut terms = Vec::new();
            for j in 0..nb {
                let pv = p.entry(cr, j);
                if pv.is_zero() {
                    continue;
                }
                let tw = ctx.poset.cocycle(
                    c.object.summands[cc],
                    b.object.summands[j],
                    c.object.summands[cr],
                )? as usize;
                terms.push((s_idx(j, cc), tshift(pv, tw)));
            }
            let rhs = if cr == cc { ring.one() } else { ring.zero() };
            sys.equation(terms, rhs);
        }
    }
    // i r + s p = id_B
    for br in 0..nb {
        for bc in 0..nb {
            let mut terms = Vec::new();
            for ar in 0..na {
                let iv = i.entry(br, ar);
                if iv.is_zero() {
                    continue;
                }
                let tw = ctx.poset.cocycle(
                    b.object.summands[bc],
                    a.object.summands[ar],
                    b.object.summands[br],
                )? as usize;
                terms.push((r_idx(ar, bc), tshift(iv, tw)));
            }
            for cr in 0..nc {
                let pv = p.entry(cr, bc);
                if pv.is_zero() {
                    continue;
                }
                let tw = ctx.poset.cocycle(
                    b.object.summands[bc],
                    c.object.summands[cr],
                    b.object.summands[br],
                )? as usize;
                terms.push((s_idx(br, cr), tshift(pv, tw)));
            }
            let rhs = if br == bc { ring.one() } else { ring.zero() };
            sys.equation(terms, rhs);
        }
    }
    let sol = sys
        .solve()
        .ok_or_else(|| Error::NotExact("no splitting exists in P(X)".into()))?;
    let mut retraction = ctx.zero_morphism(b.object.clone(), a.object.clone());
    for ar in 0..na {
        for j in 0..nb {
            *retraction.entry_mut(ar, j) = sol[r_idx(ar, j)].clone();
        }
    }
    let mut section = ctx.zero_morphism(c.object.clone(), b.object.clone());
    for j in 0..nb {
        for cc in 0..nc {
            *section.entry_mut(j, cc) = sol[s_idx(j, cc)].clone();
        }
    }
    if ctx.compose(&retraction, i)? != ctx.identity(&a.object) {
        return Err(Error::NotExact("certificate failed r i = 1".into()));
    }
    if ctx.compose(p, &section)? != ctx.identity(&c.object) {
        return Err(Error::NotExact("certificate failed p s = 1".into()));
    }
    Ok(Conflation {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        i: i.clone(),
        p: p.clone(),
        retraction,
        section,
    })
}

/// A morphism f: V -> W in P(X) induces (f, theta_W . phi f): G_phi V -> (W, d),
/// the adjunction direction Hom_P(V, W) -> Hom_MF(G_phi V, (W,d)).
pub fn adjoint_from_p(ctx: &TwistedCtx, f: &PMorphism, w: &MFObject) -> Result<PMorphism> {
    if f.target != w.object {
        return Err(Error::DimensionMismatch("f must land in W".into()));
    }
    let theta_w = ctx.theta(&w.object, &w.d)?;
    let phif = ctx.phi_morphism(f)?;
    let second = ctx.lin.compose(&theta_w, &phif)?;
    let gv_obj = f.source.direct_sum(&phif.source);
    let mut out = ctx.lin.zero_morphism(gv_obj, w.object.clone());
    let nv = f.source.len();
    for r in 0..w.object.len() {
        for c in 0..nv {
            *out.entry_mut(r, c) = f.entry(r, c).clone();
            *out.entry_mut(r, nv + c) = second.entry(r, c).clone();
        }
    }
    Ok(out)
}

/// f d_src = d_tgt f as matrices.
pub fn commutes_with_d(
    ctx: &LinCtx,
    g: &PMorphism,
    src: &MFObject,
    tgt: &MFObject,
) -> Result<bool> {
    let lhs = ctx.compose(g, &src.d)?;
    let rhs = ctx.compose(&tgt.d, g)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{AdmissibleAutomorphism, PosetParam};
    use crate::scalar::ScalarRing;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z6() -> CyclicPoset {
        CyclicPoset::zn(6).unwrap()
    }

    #[test]
    fn make_e_has_square_t() {
        let p = z6();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let e = make_e(&ctx, &EDescriptor::plain(Elem(1), Elem(3))).unwrap();
        validate(&ctx, &e).unwrap();
        assert_eq!(e.d.entry(1, 0), &ctx.ring.one());
        assert_eq!(e.d.entry(0, 1), &ctx.ring.one());
        // invalid pair on a table whose cocycle excludes d^2 = t
        let q = CyclicPoset::table(vec![0, 1], None, &[(0, 1, 0, 2), (1, 0, 1, 2)]).unwrap();
        let qctx = LinCtx::new(&q, ScalarRing::default());
        assert!(matches!(
            make_e(&qctx, &EDescriptor::plain(Elem(0), Elem(1))),
            Err(Error::InvalidPair { .. })
        ));
    }

    #[test]
    fn e_of_x_phix_is_gphi() {
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        for x in 1..=6i64 {
            let fx = phi.apply(&p, Elem(x)).unwrap();
            let e = make_e(&ctx.lin, &EDescriptor::plain(Elem(x), fx)).unwrap();
            let g = make_gphi(&ctx, &PObject::single(Elem(x))).unwrap();
            assert_eq!(e, g, "E({x}, phi {x}) = G_phi P_{x}");
        }
    }

    #[test]
    fn primed_swaps_to_plain() {
        // x ~ y in a star product over a two-element equivalence class:
        // E(x,y)' = E(y,x) under the swap
        let z1 = CyclicPoset::zn(1).unwrap();
        let pp = PosetParam::Relation {
            n: 2,
            leq: vec![(0, 1), (1, 0)],
        };
        let star = CyclicPoset::star(&z1, &pp).unwrap();
        let x = CyclicPoset::star_elem(&z1, &pp, Elem(1), 0).unwrap();
        let y = CyclicPoset::star_elem(&z1, &pp, Elem(1), 1).unwrap();
        assert!(star.equivalent(x, y).unwrap());
        let ctx = LinCtx::new(&star, ScalarRing::default());
        let primed = make_e(&ctx, &EDescriptor::primed(x, y)).unwrap();
        let swapped = make_e(&ctx, &EDescriptor::plain(y, x)).unwrap();
        assert_eq!(primed.d.entry(1, 0), swapped.d.entry(0, 1));
        assert_eq!(primed.d.entry(0, 1), swapped.d.entry(1, 0));
        validate(&ctx, &primed).unwrap();
        validate(&ctx, &swapped).unwrap();
        // canonicalization identifies them
        assert_eq!(
            EDescriptor::primed(x, y).canonical(&star).unwrap(),
            EDescriptor::plain(y, x).canonical(&star).unwrap()
        );
    }

    #[test]
    fn gphi_direct_sum_and_square() {
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        let v = PObject::new(vec![Elem(1), Elem(4)]);
        let g = make_gphi(&ctx, &v).unwrap();
        validate(&ctx.lin, &g).unwrap();
        validate_twisted(&ctx, &g).unwrap();
        let dec = decompose(&ctx.lin, &g).unwrap();
        let mut expect = vec![
            EDescriptor::plain(Elem(1), Elem(2)),
            EDescriptor::plain(Elem(4), Elem(5)),
        ];
        expect.sort();
        assert_eq!(dec.summands, expect);
    }

    #[test]
    fn zero_d_is_invalid() {
        let p = z6();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let v = PObject::new(vec![Elem(1), Elem(3)]);
        let obj = MFObject {
            object: v.clone(),
            d: ctx.zero_morphism(v.clone(), v),
        };
        assert!(validate(&ctx, &obj).is_err());
    }

    #[test]
    fn admitted_matches_validate() {
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        for x in 1..=6i64 {
            for y in 1..=6i64 {
                if x == y {
                    continue;
                }
                let admitted = admitted_in_twisted(&ctx, Elem(x), Elem(y)).unwrap();
                let e = make_e(&ctx.lin, &EDescriptor::plain(Elem(x), Elem(y))).unwrap();
                let valid = validate_twisted(&ctx, &e).is_ok();
                assert_eq!(admitted, valid, "pair ({x},{y})");
            }
        }
        assert!(admitted_in_twisted(&ctx, Elem(1), Elem(3)).unwrap());
        assert!(admitted_in_twisted(&ctx, Elem(1), Elem(2)).unwrap());
    }

    #[test]
    fn proj_inj_detection() {
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        assert!(is_proj_inj(&ctx, &EDescriptor::plain(Elem(1), Elem(2))).unwrap());
        assert!(is_proj_inj(&ctx, &EDescriptor::plain(Elem(6), Elem(1))).unwrap());
        assert!(!is_proj_inj(&ctx, &EDescriptor::plain(Elem(1), Elem(3))).unwrap());
    }

    #[test]
    fn endomorphism_ring_multiplication_table() {
        // End(E(x,y)) = R[u] with u^2 = t: (r0,r1)(s0,s1) =
        // (r0 s0 + t r1 s1, r1 s0 + r0 s1), checked on all E over Z6.
        let p = z6();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let ring = ctx.ring;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for x in 1..=6i64 {
            for y in x + 1..=6i64 {
                let e = make_e(&ctx, &EDescriptor::plain(Elem(x), Elem(y))).unwrap();
                for _ in 0..5 {
                    let mut rand_scalar = |rng: &mut ChaCha8Rng| {
                        ring.from_coeffs(&[rng.gen_range(0..101), rng.gen_range(0..101)])
                    };
                    let (r0, r1) = (rand_scalar(&mut rng), rand_scalar(&mut rng));
                    let (s0, s1) = (rand_scalar(&mut rng), rand_scalar(&mut rng));
                    let endo = |a: &Scalar, b0: &Scalar| {
                        let mut m = ctx.zero_morphism(e.object.clone(), e.object.clone());
                        *m.entry_mut(0, 0) = a.clone();
                        *m.entry_mut(1, 1) = a.clone();
                        *m.entry_mut(0, 1) = b0.clone();
                        *m.entry_mut(1, 0) = b0.clone();
                        m
                    };
                    let f = endo(&r0, &r1);
                    let g = endo(&s0, &s1);
                    assert!(commutes_with_d(&ctx, &f, &e, &e).unwrap());
                    let prod = ctx.compose(&f, &g).unwrap();
                    let t0 = ring.add(
                        &ring.mul(&r0, &s0),
                        &ring.mul(&ring.t_pow(1), &ring.mul(&r1, &s1)),
                    );
                    let t1 = ring.add(&ring.mul(&r1, &s0), &ring.mul(&r0, &s1));
                    let expect = endo(&t0, &t1);
                    assert_eq!(prod, expect, "E({x},{y})");
                }
            }
        }
    }

    /// Random invertible base change built from unit diagonal scalings and
    /// elementary transvections, applied by exact conjugation.
    fn random_base_change(
        ctx: &LinCtx,
        rng: &mut ChaCha8Rng,
        obj: &MFObject,
        ops: usize,
    ) -> MFObject {
        let n = obj.object.len();
        let mut d = obj.d.clone();
        for _ in 0..ops {
            let k = rng.gen_range(0..n);
            let l = rng.gen_range(0..n);
            if k == l {
                let c = rng.gen_range(1..101);
                let unit = ctx.ring.from_coeffs(&[c, rng.gen_range(0..101)]);
                let mut s = ctx.identity(&obj.object);
                *s.entry_mut(k, k) = unit.clone();
                let mut sinv = ctx.identity(&obj.object);
                *sinv.entry_mut(k, k) = ctx.ring.inv(&unit).unwrap();
                d = ctx
                    .compose_trunc(&ctx.compose_trunc(&s, &d).unwrap(), &sinv)
                    .unwrap();
                continue;
            }
            // keep exponents low: the precision budget is 2*maxexp + 1 < N
            let exp = rng.gen_range(0..2) as usize;
            let c = rng.gen_range(0..101);
            let mu = ctx.ring.monomial(c, exp);
            let mut e = ctx.identity(&obj.object);
            *e.entry_mut(k, l) = mu.clone();
            let mut einv = ctx.identity(&obj.object);
            *einv.entry_mut(k, l) = ctx.ring.neg(&mu);
            d = ctx
                .compose_trunc(&ctx.compose_trunc(&e, &d).unwrap(), &einv)
                .unwrap();
        }
        MFObject {
            object: obj.object.clone(),
            d,
        }
    }

    #[test]
    fn decompose_recovers_assembled_sums() {
        let p = z6();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..50 {
            let count = rng.gen_range(1..=3);
            let mut descs = Vec::new();
            let mut obj: Option<MFObject> = None;
            for _ in 0..count {
                let x = rng.gen_range(1..=6i64);
                let mut y = rng.gen_range(1..=6i64);
                while y == x {
                    y = rng.gen_range(1..=6i64);
                }
                let desc = EDescriptor::plain(Elem(x), Elem(y));
                descs.push(desc.canonical(&p).unwrap());
                let e = make_e(&ctx, &desc).unwrap();
                obj = Some(match obj {
                    None => e,
                    Some(prev) => MFObject {
                        object: prev.object.direct_sum(&e.object),
                        d: ctx.direct_sum(&prev.d, &e.d),
                    },
                });
            }
            let obj = obj.unwrap();
            let scrambled = random_base_change(&ctx, &mut rng, &obj, 8);
            validate(&ctx, &scrambled).unwrap();
            let dec = decompose(&ctx, &scrambled).unwrap();
            descs.sort();
            assert_eq!(dec.summands, descs, "trial {trial}");
            let u_d = ctx.compose_trunc(&dec.base_change, &scrambled.d).unwrap();
            let u_d_uinv = ctx.compose_trunc(&u_d, &dec.base_change_inv).unwrap();
            assert_eq!(u_d_uinv, dec.conjugated.d, "certificate, trial {trial}");
            let uu = ctx
                .compose_trunc(&dec.base_change, &dec.base_change_inv)
                .unwrap();
            assert_eq!(uu, ctx.identity(&dec.conjugated.object));
            // counterdiagonal 2x2 blocks, up to truncation dust beyond the
            // meaningful precision of the scrambled input
            let dust = ctx.ring.precision() - 1;
            for bi in 0..dec.summands.len() {
                let r0 = 2 * bi;
                for r in r0..r0 + 2 {
                    for c in 0..dec.conjugated.object.len() {
                        let inside = (r == r0 && c == r0 + 1) || (r == r0 + 1 && c == r0);
                        if !inside {
                            let v = dec.conjugated.d.entry(r, c).valuation();
                            assert!(
                                v.map(|v| v >= dust).unwrap_or(true),
                                "off-block entry ({r},{c}) in trial {trial}: {v:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_fixed_point() {
        let p = z6();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let e = make_e(&ctx, &EDescriptor::plain(Elem(2), Elem(5))).unwrap();
        let dec = decompose(&ctx, &e).unwrap();
        assert_eq!(dec.summands, vec![EDescriptor::plain(Elem(2), Elem(5))]);
    }

    #[test]
    fn decompose_refuses_non_cyclic_carrier() {
        let z3 = CyclicPoset::zn(3).unwrap();
        let prod = CyclicPoset::product(&z3, &z3).unwrap();
        assert!(!prod.is_cyclically_ordered().unwrap());
        let ctx = LinCtx::new(&prod, ScalarRing::default());
        let e0 = CyclicPoset::product_elem(&z3, &z3, Elem(1), Elem(1)).unwrap();
        let v = PObject::new(vec![e0, e0]);
        let mut d = ctx.zero_morphism(v.clone(), v.clone());
        *d.entry_mut(0, 1) = ctx.ring.t_pow(1);
        *d.entry_mut(1, 0) = ctx.ring.one();
        let obj = MFObject { object: v, d };
        assert!(matches!(
            decompose(&ctx, &obj),
            Err(Error::NonCyclicOrder(_))
        ));
    }

    #[test]
    fn summand_closure_in_twisted_category() {
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let x = rng.gen_range(1..=6i64);
            let mut y = rng.gen_range(1..=6i64);
            while y == x {
                y = rng.gen_range(1..=6i64);
            }
            let a = make_e(&ctx.lin, &EDescriptor::plain(Elem(x), Elem(y))).unwrap();
            let g = make_gphi(&ctx, &PObject::single(Elem(rng.gen_range(1..=6)))).unwrap();
            let sum = MFObject {
                object: a.object.direct_sum(&g.object),
                d: ctx.lin.direct_sum(&a.d, &g.d),
            };
            validate_twisted(&ctx, &sum).unwrap();
            let dec = decompose(&ctx.lin, &sum).unwrap();
            for desc in &dec.summands {
                let e = make_e(&ctx.lin, desc).unwrap();
                validate_twisted(&ctx, &e).unwrap();
            }
        }
    }

    #[test]
    fn conflation_exchange_sequence() {
        // E(x,y) -> E(x,b) + E(a,y) -> E(a,b) with basic maps is exact
        let p = z6();
        let ctx = LinCtx::new(&p, ScalarRing::default());
        let (x, a, y, bb) = (Elem(1), Elem(2), Elem(3), Elem(5));
        let exy = make_e(&ctx, &EDescriptor::plain(x, y)).unwrap();
        let exb = make_e(&ctx, &EDescriptor::plain(x, bb)).unwrap();
        let eay = make_e(&ctx, &EDescriptor::plain(a, y)).unwrap();
        let eab = make_e(&ctx, &EDescriptor::plain(a, bb)).unwrap();
        let mid = MFObject {
            object: exb.object.direct_sum(&eay.object),
            d: ctx.direct_sum(&exb.d, &eay.d),
        };
        let mut i = ctx.zero_morphism(exy.object.clone(), mid.object.clone());
        *i.entry_mut(0, 0) = ctx.ring.one(); // f_xx into E(x,b)
        *i.entry_mut(1, 1) = ctx.ring.one(); // f_yb
        *i.entry_mut(2, 0) = ctx.ring.one(); // f_xa into E(a,y)
        *i.entry_mut(3, 1) = ctx.ring.one(); // f_yy
        let mut pr = ctx.zero_morphism(mid.object.clone(), eab.object.clone());
        *pr.entry_mut(0, 0) = ctx.ring.one(); // E(x,b) -> E(a,b): f_xa
        *pr.entry_mut(1, 1) = ctx.ring.one(); // f_bb
        *pr.entry_mut(0, 2) = ctx.ring.neg(&ctx.ring.one()); // E(a,y) -> E(a,b): -f_aa
        *pr.entry_mut(1, 3) = ctx.ring.neg(&ctx.ring.one()); // -f_yb
        let c = conflation(&ctx, &exy, &mid, &eab, &i, &pr).unwrap();
        assert_eq!(
            ctx.compose(&c.retraction, &c.i).unwrap(),
            ctx.identity(&exy.object)
        );
        // zero maps are not exact
        let zi = ctx.zero_morphism(exy.object.clone(), mid.object.clone());
        let zp = ctx.zero_morphism(mid.object.clone(), eab.object.clone());
        assert!(matches!(
            conflation(&ctx, &exy, &mid, &eab, &zi, &zp),
            Err(Error::NotExact(_))
        ));
    }

    #[test]
    fn counit_conflation() {
        // K -> G_phi V -> (V,d): the adjoint of the identity is the
        // projective cover; its kernel completes to a conflation.
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        let e = make_e(&ctx.lin, &EDescriptor::plain(Elem(1), Elem(4))).unwrap();
        let g = make_gphi(&ctx, &e.object).unwrap();
        let idv = ctx.lin.identity(&e.object);
        let counit = adjoint_from_p(&ctx, &idv, &e).unwrap();
        assert!(commutes_with_d(&ctx.lin, &counit, &g, &e).unwrap());
        // kernel of [id, theta]: K = (phi V, -eta theta) via i = (-theta; id)
        let theta = ctx.theta(&e.object, &e.d).unwrap();
        let phiv = ctx.phi_object(&e.object).unwrap();
        let eta = ctx.eta(&e.object).unwrap();
        let etatheta = ctx.lin.compose(&eta, &theta).unwrap();
        let k = MFObject {
            object: phiv.clone(),
            d: ctx.lin.scale(&etatheta, &ctx.ring().neg(&ctx.ring().one())),
        };
        validate(&ctx.lin, &k).unwrap();
        let mut i = ctx.lin.zero_morphism(phiv.clone(), g.object.clone());
        let nv = e.object.len();
        for r in 0..nv {
            for c in 0..nv {
                *i.entry_mut(r, c) = ctx.ring().neg(theta.entry(r, c));
                if r == c {
                    *i.entry_mut(nv + r, c) = ctx.ring().one();
                }
            }
        }
        let conf = conflation(&ctx.lin, &k, &g, &e, &i, &counit);
        assert!(conf.is_ok(), "{:?}", conf.err());
    }

    #[test]
    fn adjunction_roundtrip() {
        // f: V -> W corresponds to (f, theta_W phi f): G_phi V -> (W,d);
        // restriction to the V block recovers f.
        let p = z6();
        let phi = p.canonical_automorphism().unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &phi);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..25 {
            let v = PObject::new(vec![Elem(rng.gen_range(1..=6))]);
            let x = rng.gen_range(1..=6i64);
            let mut y = rng.gen_range(1..=6i64);
            while y == x {
                y = rng.gen_range(1..=6i64);
            }
            let w = make_e(&ctx.lin, &EDescriptor::plain(Elem(x), Elem(y))).unwrap();
            let mut f = ctx.lin.zero_morphism(v.clone(), w.object.clone());
            for r in 0..w.object.len() {
                *f.entry_mut(r, 0) = ctx
                    .ring()
                    .from_coeffs(&[rng.gen_range(0..101), rng.gen_range(0..101)]);
            }
            let g = adjoint_from_p(&ctx, &f, &w).unwrap();
            let gv = make_gphi(&ctx, &v).unwrap();
            assert!(commutes_with_d(&ctx.lin, &g, &gv, &w).unwrap());
            for r in 0..w.object.len() {
                assert_eq!(g.entry(r, 0), f.entry(r, 0));
            }
        }
    }

    #[test]
    fn guard_order_admissibility_first() {
        let p = z6();
        let pairs: Vec<(i64, i64)> = (1..=6).map(|i| (i, (i + 2) % 6 + 1)).collect();
        let offsets: Vec<(i64, i64)> = (1..=6)
            .map(|i| (i, if i + 3 > 6 { 1 } else { 0 }))
            .collect();
        let bad = AdmissibleAutomorphism::from_table(&pairs, &offsets).unwrap();
        let ctx = TwistedCtx::new(&p, ScalarRing::default(), &bad);
        let e = make_e(&ctx.lin, &EDescriptor::plain(Elem(1), Elem(4))).unwrap();
        assert!(matches!(
            validate_twisted(&ctx, &e),
            Err(Error::NotAdmissible(_))
        ));
    }
}
