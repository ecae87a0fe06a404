//! The additive category P(X) = add RX: formal direct sums of objects P_x
//! and labeled matrices of scalars between them, composed with the twist
//! f_{yz} . f_{xy} = t^{c(xyz)} f_{xz}.

use crate::error::{Error, Result};
use crate::poset::{AdmissibleAutomorphism, CyclicPoset, Elem};
use crate::scalar::{Scalar, ScalarRing};
use serde::{Deserialize, Serialize};

/// A formal direct sum of P_x objects (with multiplicity).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PObject {
    pub summands: Vec<Elem>,
}

impl PObject {
    pub fn new(summands: Vec<Elem>) -> Self {
        PObject { summands }
    }

    pub fn single(x: Elem) -> Self {
        PObject { summands: vec![x] }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn direct_sum(&self, other: &PObject) -> PObject {
        let mut summands = self.summands.clone();
        summands.extend_from_slice(&other.summands);
        PObject { summands }
    }
}

/// A morphism between formal sums: entry (row j, col i) is the coefficient
/// of the basic morphism f_{source_i, target_j}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMorphism {
    pub source: PObject,
    pub target: PObject,
    /// Row-major: entries[row * source.len() + col].
    pub entries: Vec<Scalar>,
}

/// Shared read-only context for all linear-category operations.
#[derive(Debug, Clone, Copy)]
pub struct LinCtx<'a> {
    pub poset: &'a CyclicPoset,
    pub ring: ScalarRing,
}

impl<'a> LinCtx<'a> {
    pub fn new(poset: &'a CyclicPoset, ring: ScalarRing) -> Self {
        LinCtx { poset, ring }
    }

    pub fn zero_morphism(&self, source: PObject, target: PObject) -> PMorphism {
        let entries = vec![self.ring.zero(); source.len() * target.len()];
        PMorphism {
            source,
            target,
            entries,
        }
    }

    pub fn identity(&self, v: &PObject) -> PMorphism {
        let mut f = self.zero_morphism(v.clone(), v.clone());
        for i in 0..v.len() {
            *f.entry_mut(i, i) = self.ring.one();
        }
        f
    }

    /// The basic morphism f_{xy} as a 1x1 matrix.
    pub fn basic(&self, x: Elem, y: Elem) -> Result<PMorphism> {
        if !self.poset.contains(x) {
            return Err(Error::NotInCarrier(x.0));
        }
        if !self.poset.contains(y) {
            return Err(Error::NotInCarrier(y.0));
        }
        Ok(PMorphism {
            source: PObject::single(x),
            target: PObject::single(y),
            entries: vec![self.ring.one()],
        })
    }

    /// Twisted composition: entry (k,i) of g.f is
    /// sum_j g[k,j] * f[j,i] * t^{c(source_i, mid_j, target_k)}.
    /// A product of nonzero scalars that would truncate to zero raises
    /// precision-exhaustion rather than losing information silently.
    pub fn compose(&self, g: &PMorphism, f: &PMorphism) -> Result<PMorphism> {
        if f.target != g.source {
            return Err(Error::DimensionMismatch(format!(
                "compose: inner objects differ ({:?} vs {:?})",
                f.target.summands, g.source.summands
            )));
        }
        let mut out = self.zero_morphism(f.source.clone(), g.target.clone());
        for k in 0..g.target.len() {
            for i in 0..f.source.len() {
                let mut acc = self.ring.zero();
                for j in 0..f.target.len() {
                    let a = g.entry(k, j);
                    let b = f.entry(j, i);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let c = self.poset.cocycle(
                        f.source.summands[i],
                        f.target.summands[j],
                        g.target.summands[k],
                    )?;
                    let term = self.ring.mul_checked(a, b, c as usize)?;
                    acc = self.ring.add(&acc, &term);
                }
                *out.entry_mut(k, i) = acc;
            }
        }
        Ok(out)
    }

    /// Twisted composition as plain arithmetic in k[t]/(t^N): products past
    /// the precision floor truncate to zero without flagging. Used where
    /// mod-t^N semantics is intended (validation, certificates, oracles).
    pub fn compose_trunc(&self, g: &PMorphism, f: &PMorphism) -> Result<PMorphism> {
        if f.target != g.source {
            return Err(Error::DimensionMismatch(format!(
                "compose: inner objects differ ({:?} vs {:?})",
                f.target.summands, g.source.summands
            )));
        }
        let mut out = self.zero_morphism(f.source.clone(), g.target.clone());
        for k in 0..g.target.len() {
            for i in 0..f.source.len() {
                let mut acc = self.ring.zero();
                for j in 0..f.target.len() {
                    let a = g.entry(k, j);
                    let b = f.entry(j, i);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let c = self.poset.cocycle(
                        f.source.summands[i],
                        f.target.summands[j],
                        g.target.summands[k],
                    )?;
                    let prod = self.ring.mul(a, b);
                    let term = match self.ring.shift_up(&prod, c as usize) {
                        Ok(s) => s,
                        Err(_) => {
                            // shift past the precision floor: zero in the ring
                            let mut coeffs = prod.coeffs().to_vec();
                            for x in coeffs.iter_mut().rev().take(c as usize) {
                                *x = 0;
                            }
                            self.ring.shift_up(
                                &self.ring.from_coeffs(
                                    &coeffs.iter().map(|&x| x as i64).collect::<Vec<_>>(),
                                ),
                                c as usize,
                            )?
                        }
                    };
                    acc = self.ring.add(&acc, &term);
                }
                *out.entry_mut(k, i) = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, f: &PMorphism, g: &PMorphism) -> Result<PMorphism> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::DimensionMismatch("add: shapes differ".into()));
        }
        let mut out = f.clone();
        for (a, b) in out.entries.iter_mut().zip(&g.entries) {
            *a = self.ring.add(a, b);
        }
        Ok(out)
    }

    pub fn sub(&self, f: &PMorphism, g: &PMorphism) -> Result<PMorphism> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::DimensionMismatch("sub: shapes differ".into()));
        }
        let mut out = f.clone();
        for (a, b) in out.entries.iter_mut().zip(&g.entries) {
            *a = self.ring.sub(a, b);
        }
        Ok(out)
    }

    pub fn scale(&self, f: &PMorphism, s: &Scalar) -> PMorphism {
        let mut out = f.clone();
        for a in out.entries.iter_mut() {
            *a = self.ring.mul(a, s);
        }
        out
    }

    /// Block-diagonal direct sum of morphisms.
    pub fn direct_sum(&self, f: &PMorphism, g: &PMorphism) -> PMorphism {
        let source = f.source.direct_sum(&g.source);
        let target = f.target.direct_sum(&g.target);
        let mut out = self.zero_morphism(source, target);
        for r in 0..f.target.len() {
            for c in 0..f.source.len() {
                *out.entry_mut(r, c) = f.entry(r, c).clone();
            }
        }
        for r in 0..g.target.len() {
            for c in 0..g.source.len() {
                *out.entry_mut(f.target.len() + r, f.source.len() + c) = g.entry(r, c).clone();
            }
        }
        out
    }
}

impl PMorphism {
    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.source.len() + col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut Scalar {
        let w = self.source.len();
        &mut self.entries[row * w + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

/// Context for the twisted constructions: a poset with an admissible
/// automorphism and its chosen lifting offsets.
#[derive(Debug, Clone, Copy)]
pub struct TwistedCtx<'a> {
    pub lin: LinCtx<'a>,
    pub phi: &'a AdmissibleAutomorphism,
}

impl<'a> TwistedCtx<'a> {
    pub fn new(poset: &'a CyclicPoset, ring: ScalarRing, phi: &'a AdmissibleAutomorphism) -> Self {
        TwistedCtx {
            lin: LinCtx::new(poset, ring),
            phi,
        }
    }

    pub fn poset(&self) -> &CyclicPoset {
        self.lin.poset
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.lin.ring
    }

    /// phi applied summand-wise to an object.
    pub fn phi_object(&self, v: &PObject) -> Result<PObject> {
        let summands = v
            .summands
            .iter()
            .map(|&x| self.phi.apply(self.poset(), x))
            .collect::<Result<Vec<_>>>()?;
        Ok(PObject { summands })
    }

    /// phi applied to a morphism: phi(f_{xy}) = f_{phi x, phi y} entrywise.
    pub fn phi_morphism(&self, f: &PMorphism) -> Result<PMorphism> {
        Ok(PMorphism {
            source: self.phi_object(&f.source)?,
            target: self.phi_object(&f.target)?,
            entries: f.entries.clone(),
        })
    }

    /// Exponent e(x -> z) such that a morphism P_x -> P_z factors through
    /// eta_x iff its coefficient is divisible by t^{e}. This is
    /// a(x) - b(x, phi x) + c(x, phi x, z).
    pub fn eta_exponent(&self, x: Elem, z: Elem) -> Result<i64> {
        let p = self.poset();
        let fx = self.phi.apply(p, x)?;
        Ok(self.phi.offset(p, x)? - p.b(x, fx)? + p.cocycle(x, fx, z)?)
    }

    /// eta_V : V -> phi V, on each summand the basic morphism x -> phi x
    /// placed at the chosen lifting level a(x).
    pub fn eta(&self, v: &PObject) -> Result<PMorphism> {
        let p = self.poset();
        let target = self.phi_object(v)?;
        let mut out = self.lin.zero_morphism(v.clone(), target);
        for (i, &x) in v.summands.iter().enumerate() {
            let fx = self.phi.apply(p, x)?;
            let exp = self.phi.offset(p, x)? - p.b(x, fx)?;
            debug_assert!(exp >= 0);
            *out.entry_mut(i, i) = self.ring().t_pow(exp as usize);
        }
        Ok(out)
    }

    /// xi_V : phi V -> V, the complementary map with xi . eta = t.
    pub fn xi(&self, v: &PObject) -> Result<PMorphism> {
        let p = self.poset();
        let source = self.phi_object(v)?;
        let mut out = self.lin.zero_morphism(source, v.clone());
        for (i, &x) in v.summands.iter().enumerate() {
            let fx = self.phi.apply(p, x)?;
            let exp = 1 - self.phi.offset(p, x)? - p.b(fx, x)?;
            if exp < 0 {
                return Err(Error::NotAdmissible(format!(
                    "xi exponent negative at {}",
                    p.label(x)
                )));
            }
            *out.entry_mut(i, i) = self.ring().t_pow(exp as usize);
        }
        Ok(out)
    }

    /// theta for d : V -> V factoring through eta_V: the unique morphism
    /// phi V -> V with theta . eta = d. Errors with the offending entry
    /// when d does not factor.
    pub fn theta(&self, v: &PObject, d: &PMorphism) -> Result<PMorphism> {
        if d.source != *v || d.target != *v {
            return Err(Error::DimensionMismatch("theta: d must be V -> V".into()));
        }
        let source = self.phi_object(v)?;
        let mut out = self.lin.zero_morphism(source, v.clone());
        for row in 0..v.len() {
            for col in 0..v.len() {
                let e = self.eta_exponent(v.summands[col], v.summands[row])?;
                let val = d.entry(row, col);
                if val.is_zero() {
                    continue;
                }
                if val.valuation().map(|v| (v as i64) < e).unwrap_or(false) {
                    return Err(Error::NotFactoring { row, col });
                }
                *out.entry_mut(row, col) =
                    self.ring().div_exact(val, &self.ring().t_pow(e as usize))?;
            }
        }
        Ok(out)
    }
}

/// A finite window of the infinite matrix Theta(f) of the completed
/// linearization: rows and columns indexed by covering elements
/// (sigma^j y, sigma^i x) for levels in [lo, hi].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaWindow {
    pub source: Elem,
    pub target: Elem,
    pub lo: i64,
    pub hi: i64,
    /// entries[(j - lo) * width + (i - lo)] for the (sigma^j target, sigma^i source) slot.
    pub entries: Vec<u32>,
    pub prime: u32,
}

impl ThetaWindow {
    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn at(&self, j: i64, i: i64) -> u32 {
        self.entries[((j - self.lo) as usize) * self.width() + (i - self.lo) as usize]
    }
}

/// The completed-linearization functor on a scalar multiple of a basic
/// morphism: g = (sum g_n t^n) f_{xy} becomes the infinite matrix with
/// (sigma^j lambda(y), sigma^i lambda(x)) entry g_n where n = j - i - b(x,y),
/// restricted to the level window [lo, hi].
pub fn theta_window(
    ctx: &LinCtx,
    x: Elem,
    y: Elem,
    g: &Scalar,
    lo: i64,
    hi: i64,
) -> Result<ThetaWindow> {
    if lo > hi {
        return Err(Error::WindowTooSmall("empty theta window".into()));
    }
    let b = ctx.poset.b(x, y)?;
    let width = (hi - lo + 1) as usize;
    let mut entries = vec![0u32; width * width];
    for j in lo..=hi {
        for i in lo..=hi {
            let n = j - i - b;
            if n >= 0 {
                entries[((j - lo) as usize) * width + (i - lo) as usize] =
                    ctx.ring.coeff(g, n as usize);
            }
        }
    }
    Ok(ThetaWindow {
        source: x,
        target: y,
        lo,
        hi,
        entries,
        prime: ctx.ring.prime(),
    })
}

/// Matrix product of two theta windows (h: y -> z) . (g: x -> y), defined on
/// the full window; rows/columns near the boundary are truncated, so compare
/// with the direct window on the interior only.
pub fn theta_window_product(h: &ThetaWindow, g: &ThetaWindow) -> Result<ThetaWindow> {
    if h.source != g.target || h.lo != g.lo || h.hi != g.hi {
        return Err(Error::DimensionMismatch("theta window product".into()));
    }
    let width = h.width();
    let p = h.prime as u64;
    let mut entries = vec![0u32; width * width];
    for r in 0..width {
        for c in 0..width {
            let mut acc = 0u64;
            for k in 0..width {
                acc = (acc + h.entries[r * width + k] as u64 * g.entries[k * width + c] as u64) % p;
            }
            entries[r * width + c] = acc as u32;
        }
    }
    Ok(ThetaWindow {
        source: g.source,
        target: h.target,
        lo: h.lo,
        hi: h.hi,
        entries,
        prime: h.prime,
    })
}

/// An R-linear system over the scalar ring, solved by flattening to F_p.
/// Used for split-exactness certificates and morphism construction.
pub struct RLinearSystem {
    ring: ScalarRing,
    pub unknowns: usize,
    rows: Vec<(Vec<(usize, Scalar)>, Scalar)>,
}

impl RLinearSystem {
    pub fn new(ring: ScalarRing, unknowns: usize) -> Self {
        RLinearSystem {
            ring,
            unknowns,
            rows: Vec::new(),
        }
    }

    /// Add the equation sum_k coeff_k * u_{idx_k} = rhs (R-linear).
    pub fn equation(&mut self, terms: Vec<(usize, Scalar)>, rhs: Scalar) {
        self.rows.push((terms, rhs));
    }

    /// Returns a particular solution (free variables zero), or None when
    /// the system is inconsistent.
    pub fn solve(&self) -> Option<Vec<Scalar>> {
        let n = self.ring.precision();
        let p = self.ring.prime() as u64;
        let cols = self.unknowns * n;
        let mut mat: Vec<Vec<u32>> = Vec::new();
        let mut rhs: Vec<u32> = Vec::new();
        for (terms, b) in &self.rows {
            // the t^d component of c * u is sum_{a+e=d} c_a u_e
            for d in 0..n {
                let mut row = vec![0u32; cols];
                for (uidx, c) in terms {
                    for e in 0..=d {
                        let ca = self.ring.coeff(c, d - e);
                        if ca != 0 {
                            let slot = uidx * n + e;
                            row[slot] = ((row[slot] as u64 + ca as u64) % p) as u32;
                        }
                    }
                }
                mat.push(row);
                rhs.push(self.ring.coeff(b, d));
            }
        }
        solve_fp(&mut mat, &mut rhs, cols, p).map(|sol| {
            (0..self.unknowns)
                .map(|u| {
                    let coeffs: Vec<i64> = (0..n).map(|e| sol[u * n + e] as i64).collect();
                    self.ring.from_coeffs(&coeffs)
                })
                .collect()
        })
    }
}

/// In-place Gaussian elimination over F_p; returns a particular solution.
pub(crate) fn solve_fp(
    mat: &mut Vec<Vec<u32>>,
    rhs: &mut Vec<u32>,
    cols: usize,
    p: u64,
) -> Option<Vec<u32>> {
    let rows = mat.len();
    let inv = |a: u64| -> u64 {
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
    };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pr);
        rhs.swap(r, pr);
        let iv = inv(mat[r][c] as u64);
        for x in mat[r].iter_mut() {
            *x = (*x as u64 * iv % p) as u32;
        }
        rhs[r] = (rhs[r] as u64 * iv % p) as u32;
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let f = mat[i][c] as u64;
                for j in 0..cols {
                    let v = (mat[i][j] as u64 + (p - f % p) * mat[r][j] as u64) % p;
                    mat[i][j] = v as u32;
                }
                rhs[i] = ((rhs[i] as u64 + (p - f % p) * rhs[r] as u64) % p) as u32;
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if rhs[i] != 0 && mat[i].iter().all(|&x| x == 0) {
            return None;
        }
    }
    let mut sol = vec![0u32; cols];
    for c in 0..cols {
        if let Some(pr) = pivot_of_col[c] {
            sol[c] = rhs[pr];
        }
    }
    Some(sol)
}
