//! Cyclic posets as reduced cocycles.
//!
//! A cyclic poset is a carrier set together with a reduced cocycle
//! c : X^3 -> N. All order data (covering poset, distance functions, the
//! cyclic-order predicate, equivalence) is derived from c. Infinite
//! carriers (Z, Z_m * Z, Z x Z) are formula-backed with an explicit level
//! window so that every check terminates and is exact.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// An element of a carrier. For builder-backed carriers the id encodes the
/// element (Zn / Zwindow: the integer; ZmStarZ: lambda = m*k+p; ZxZ: packed
/// pair). Table carriers use arbitrary ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub i64);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A covering-poset element (x, j): the j-th lift of x in the canonical
/// Z-level model. (x,j) <= (y,k) iff k - j >= b(x,y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CovElem {
    pub elem: Elem,
    pub level: i64,
}

pub fn cov(elem: Elem, level: i64) -> CovElem {
    CovElem { elem, level }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct TableData {
    pub elems: Vec<i64>,
    pub labels: Vec<String>,
    /// Dense cocycle, indexed [i][j][k] -> n*n*i + n*j + k.
    pub cocycle: Vec<i64>,
    #[serde(skip)]
    pub index: HashMap<i64, usize>,
}

impl TableData {
    pub fn rebuild_index(&mut self) {
        self.index = self
            .elems
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
    }

    fn idx(&self, e: Elem) -> Result<usize> {
        self.index
            .get(&e.0)
            .copied()
            .ok_or(Error::NotInCarrier(e.0))
    }

    fn c(&self, x: usize, y: usize, z: usize) -> i64 {
        let n = self.elems.len();
        self.cocycle[n * n * x + n * y + z]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) enum PosetKind {
    /// Finite table-backed carrier with an explicitly stored cocycle.
    Table(TableData),
    /// Z_n = {1..n} cyclically ordered.
    Zn { n: i64 },
    /// The integers with their total order, windowed to [lo, hi].
    Zwindow { lo: i64, hi: i64 },
    /// Z_m * Z: elements x_k^p encoded as lambda = m*k + p, p in 1..=m.
    /// Window is in lambda coordinates.
    ZmStarZ { m: i64, lo: i64, hi: i64 },
    /// Z x Z with lexicographic order, windowed in both coordinates.
    ZxZ {
        s_lo: i64,
        s_hi: i64,
        i_lo: i64,
        i_hi: i64,
    },
}

/// A cyclic poset (X, c).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclicPoset {
    pub(crate) kind: PosetKind,
}

/// Finite poset parameter for the star builder X * P.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PosetParam {
    /// Total order 0 < 1 < ... < n-1.
    Chain(usize),
    /// n pairwise incomparable elements.
    Antichain(usize),
    /// Explicit reflexive-transitive relation (validated).
    Relation { n: usize, leq: Vec<(usize, usize)> },
}

impl PosetParam {
    fn size(&self) -> usize {
        match self {
            PosetParam::Chain(n) | PosetParam::Antichain(n) => *n,
            PosetParam::Relation { n, .. } => *n,
        }
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        match self {
            PosetParam::Chain(_) => a <= b,
            PosetParam::Antichain(_) => a == b,
            PosetParam::Relation { leq, .. } => a == b || leq.contains(&(a, b)),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.size() == 0 {
            return Err(Error::InvalidParams("poset parameter is empty".into()));
        }
        if let PosetParam::Relation { n, leq } = self {
            for &(a, b) in leq {
                if a >= *n || b >= *n {
                    return Err(Error::InvalidParams("relation index out of range".into()));
                }
            }
            // transitivity
            for &(a, b) in leq {
                for &(c, d) in leq {
                    if b == c && !self.leq(a, d) {
                        return Err(Error::InvalidParams(format!(
                            "relation not transitive: {a}<={b}<={d}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Pack a Z x Z element into an id.
pub fn zxz_elem(s: i64, i: i64) -> Elem {
    debug_assert!(i32::try_from(s).is_ok() && i32::try_from(i).is_ok());
    Elem(((s as i32 as i64) << 32) | (i as i32 as u32 as i64))
}

/// Unpack a Z x Z element id.
pub fn zxz_parts(e: Elem) -> (i64, i64) {
    let s = (e.0 >> 32) as i32 as i64;
    let i = (e.0 & 0xffff_ffff) as u32 as i32 as i64;
    (s, i)
}

/// Element of Z_m * Z from block p (1..=m) and level k; id is lambda = m*k+p.
pub fn zmstar_elem(m: i64, p: i64, k: i64) -> Elem {
    Elem(m * k + p)
}

/// (block, level) of a Z_m * Z element, normalized so block is in 1..=m.
pub fn zmstar_parts(m: i64, e: Elem) -> (i64, i64) {
    let p = (e.0 - 1).rem_euclid(m) + 1;
    let k = (e.0 - p) / m;
    (p, k)
}

impl CyclicPoset {
    pub fn zn(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams(format!("Zn needs n >= 1, got {n}")));
        }
        Ok(CyclicPoset {
            kind: PosetKind::Zn { n },
        })
    }

    pub fn zwindow(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParams(format!("empty window {lo}..{hi}")));
        }
        Ok(CyclicPoset {
            kind: PosetKind::Zwindow { lo, hi },
        })
    }

    pub fn zm_star_z(m: i64, lo: i64, hi: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParams(format!(
                "ZmStarZ needs m >= 1, got {m}"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidParams(format!("empty window {lo}..{hi}")));
        }
        Ok(CyclicPoset {
            kind: PosetKind::ZmStarZ { m, lo, hi },
        })
    }

    pub fn zxz(s_lo: i64, s_hi: i64, i_lo: i64, i_hi: i64) -> Result<Self> {
        if s_lo > s_hi || i_lo > i_hi {
            return Err(Error::InvalidParams("empty ZxZ window".into()));
        }
        Ok(CyclicPoset {
            kind: PosetKind::ZxZ {
                s_lo,
                s_hi,
                i_lo,
                i_hi,
            },
        })
    }

    /// Table-backed poset from explicit elements and cocycle triples.
    /// Unlisted triples default to zero. The cocycle is NOT validated here;
    /// run [`CyclicPoset::verify_cocycle`].
    pub fn table(
        elems: Vec<i64>,
        labels: Option<Vec<String>>,
        triples: &[(i64, i64, i64, i64)],
    ) -> Result<Self> {
        let n = elems.len();
        if n == 0 {
            return Err(Error::InvalidParams("empty carrier".into()));
        }
        let labels = labels.unwrap_or_else(|| elems.iter().map(|e| e.to_string()).collect());
        if labels.len() != n {
            return Err(Error::InvalidParams("labels length mismatch".into()));
        }
        let mut data = TableData {
            elems,
            labels,
            cocycle: vec![0; n * n * n],
            index: HashMap::new(),
        };
        data.rebuild_index();
        for &(x, y, z, c) in triples {
            let (i, j, k) = (data.idx(Elem(x))?, data.idx(Elem(y))?, data.idx(Elem(z))?);
            data.cocycle[n * n * i + n * j + k] = c;
        }
        Ok(CyclicPoset {
            kind: PosetKind::Table(data),
        })
    }

    /// Product cyclic poset: c((x1,x2),(y1,y2),(z1,z2)) = c1 + c2.
    /// Both factors must have finite windows; the result is table-backed
    /// with ids i1 * n2 + i2.
    pub fn product(p1: &CyclicPoset, p2: &CyclicPoset) -> Result<Self> {
        let e1 = p1.elements();
        let e2 = p2.elements();
        let n2 = e2.len() as i64;
        let mut elems = Vec::new();
        let mut labels = Vec::new();
        for (i1, &a) in e1.iter().enumerate() {
            for (i2, &b) in e2.iter().enumerate() {
                elems.push(i1 as i64 * n2 + i2 as i64);
                labels.push(format!("({},{})", p1.label(a), p2.label(b)));
            }
        }
        let n = elems.len();
        let mut cocycle = vec![0i64; n * n * n];
        let at = |i: usize| (e1[i / n2 as usize], e2[i % n2 as usize]);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (x1, x2) = at(x);
                    let (y1, y2) = at(y);
                    let (z1, z2) = at(z);
                    cocycle[n * n * x + n * y + z] =
                        p1.cocycle(x1, y1, z1)? + p2.cocycle(x2, y2, z2)?;
                }
            }
        }
        let mut data = TableData {
            elems,
            labels,
            cocycle,
            index: HashMap::new(),
        };
        data.rebuild_index();
        Ok(CyclicPoset {
            kind: PosetKind::Table(data),
        })
    }

    /// Element of a product poset from factor elements.
    pub fn product_elem(p1: &CyclicPoset, p2: &CyclicPoset, a: Elem, b: Elem) -> Result<Elem> {
        let i1 = p1
            .elements()
            .iter()
            .position(|&e| e == a)
            .ok_or(Error::NotInCarrier(a.0))?;
        let i2 = p2
            .elements()
            .iter()
            .position(|&e| e == b)
            .ok_or(Error::NotInCarrier(b.0))?;
        Ok(Elem(i1 as i64 * p2.elements().len() as i64 + i2 as i64))
    }

    /// Star product X * P: covering poset is cover(X) x P with lexicographic
    /// order, sigma acting on the first coordinate only.
    pub fn star(x: &CyclicPoset, p: &PosetParam) -> Result<Self> {
        p.validate()?;
        let ex = x.elements();
        let np = p.size() as i64;
        let mut elems = Vec::new();
        let mut labels = Vec::new();
        for (ix, &a) in ex.iter().enumerate() {
            for ip in 0..np {
                elems.push(ix as i64 * np + ip);
                labels.push(format!("({},{})", x.label(a), ip));
            }
        }
        // b((x,p),(y,q)) = b_X(x,y) + [x ~ y and not p <= q]
        let n = elems.len();
        let at = |i: usize| (ex[i / np as usize], (i % np as usize));
        let bf = |u: usize, v: usize| -> Result<i64> {
            let (xu, pu) = at(u);
            let (xv, pv) = at(v);
            let mut b = x.b(xu, xv)?;
            if x.equivalent(xu, xv)? && !p.leq(pu, pv) {
                b += 1;
            }
            Ok(b)
        };
        let mut cocycle = vec![0i64; n * n * n];
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let c = bf(v, w)? - bf(u, w)? + bf(u, v)?;
                    debug_assert!(c >= 0);
                    cocycle[n * n * u + n * v + w] = c;
                }
            }
        }
        let mut data = TableData {
            elems,
            labels,
            cocycle,
            index: HashMap::new(),
        };
        data.rebuild_index();
        Ok(CyclicPoset {
            kind: PosetKind::Table(data),
        })
    }

    /// Element of a star poset from factor data (index into X's window, index in P).
    pub fn star_elem(x: &CyclicPoset, p: &PosetParam, a: Elem, ip: usize) -> Result<Elem> {
        let ix = x
            .elements()
            .iter()
            .position(|&e| e == a)
            .ok_or(Error::NotInCarrier(a.0))?;
        if ip >= p.size() {
            return Err(Error::InvalidParams(format!("{ip} out of range for P")));
        }
        Ok(Elem(ix as i64 * p.size() as i64 + ip as i64))
    }

    /// All elements in the (window of the) carrier, in canonical order.
    pub fn elements(&self) -> Vec<Elem> {
        match &self.kind {
            PosetKind::Table(d) => d.elems.iter().map(|&e| Elem(e)).collect(),
            PosetKind::Zn { n } => (1..=*n).map(Elem).collect(),
            PosetKind::Zwindow { lo, hi } => (*lo..=*hi).map(Elem).collect(),
            PosetKind::ZmStarZ { lo, hi, .. } => (*lo..=*hi).map(Elem).collect(),
            PosetKind::ZxZ {
                s_lo,
                s_hi,
                i_lo,
                i_hi,
            } => {
                let mut out = Vec::new();
                for s in *s_lo..=*s_hi {
                    for i in *i_lo..=*i_hi {
                        out.push(zxz_elem(s, i));
                    }
                }
                out
            }
        }
    }

    pub fn contains(&self, e: Elem) -> bool {
        match &self.kind {
            PosetKind::Table(d) => d.index.contains_key(&e.0),
            PosetKind::Zn { n } => (1..=*n).contains(&e.0),
            PosetKind::Zwindow { lo, hi } => (*lo..=*hi).contains(&e.0),
            PosetKind::ZmStarZ { lo, hi, .. } => (*lo..=*hi).contains(&e.0),
            PosetKind::ZxZ {
                s_lo,
                s_hi,
                i_lo,
                i_hi,
            } => {
                let (s, i) = zxz_parts(e);
                (*s_lo..=*s_hi).contains(&s) && (*i_lo..=*i_hi).contains(&i)
            }
        }
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.kind {
            PosetKind::Table(d) => d
                .index
                .get(&e.0)
                .map(|&i| d.labels[i].clone())
                .unwrap_or_else(|| format!("?{}", e.0)),
            PosetKind::ZmStarZ { m, .. } => {
                let (p, k) = zmstar_parts(*m, e);
                format!("x_{k}^{p}")
            }
            PosetKind::ZxZ { .. } => {
                let (s, i) = zxz_parts(e);
                format!("({s},{i})")
            }
            _ => e.0.to_string(),
        }
    }

    fn check_contains(&self, e: Elem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotInCarrier(e.0))
        }
    }

    /// True when y is at or after x in the canonical linearization of the
    /// cyclic order; used to define the canonical distance function.
    fn linear_leq(&self, x: Elem, y: Elem) -> bool {
        match &self.kind {
            PosetKind::Table(_) => unreachable!("tables use the stored cocycle"),
            PosetKind::Zn { .. } | PosetKind::Zwindow { .. } => x.0 <= y.0,
            PosetKind::ZmStarZ { m, .. } => {
                let (px, kx) = zmstar_parts(*m, x);
                let (py, ky) = zmstar_parts(*m, y);
                (px, kx) <= (py, ky)
            }
            PosetKind::ZxZ { .. } => zxz_parts(x) <= zxz_parts(y),
        }
    }

    /// Canonical distance function b(x,y): smallest m with lift(x) <= sigma^m lift(y).
    pub fn b(&self, x: Elem, y: Elem) -> Result<i64> {
        self.check_contains(x)?;
        self.check_contains(y)?;
        match &self.kind {
            PosetKind::Table(d) => {
                let x0 = 0usize;
                let (i, j) = (d.idx(x)?, d.idx(y)?);
                Ok(d.c(x0, i, j))
            }
            _ => Ok(if self.linear_leq(x, y) { 0 } else { 1 }),
        }
    }

    /// The reduced cocycle c(x,y,z).
    pub fn cocycle(&self, x: Elem, y: Elem, z: Elem) -> Result<i64> {
        match &self.kind {
            PosetKind::Table(d) => {
                let (i, j, k) = (d.idx(x)?, d.idx(y)?, d.idx(z)?);
                Ok(d.c(i, j, k))
            }
            _ => Ok(self.b(y, z)? - self.b(x, z)? + self.b(x, y)?),
        }
    }

    /// x ~ y iff c(xyx) = c(yxy) = 0.
    pub fn equivalent(&self, x: Elem, y: Elem) -> Result<bool> {
        Ok(self.cocycle(x, y, x)? == 0 && self.cocycle(y, x, y)? == 0)
    }

    /// Covering order: (x,j) <= (y,k) iff k - j >= b(x,y).
    pub fn covering_leq(&self, u: CovElem, v: CovElem) -> Result<bool> {
        Ok(v.level - u.level >= self.b(u.elem, v.elem)?)
    }

    pub fn covering_lt(&self, u: CovElem, v: CovElem) -> Result<bool> {
        Ok(self.covering_leq(u, v)? && !self.covering_leq(v, u)?)
    }

    pub fn covering_equiv(&self, u: CovElem, v: CovElem) -> Result<bool> {
        Ok(self.covering_leq(u, v)? && self.covering_leq(v, u)?)
    }

    /// (x,y,z) in cyclic order iff b(x,y) + b(y,z) + b(z,x) <= 1
    /// (minimal-lift stacking).
    pub fn cyclic_order_triple(&self, x: Elem, y: Elem, z: Elem) -> Result<bool> {
        Ok(self.b(x, y)? + self.b(y, z)? + self.b(z, x)? <= 1)
    }

    /// True when the window is totally cyclically ordered: all cocycle values
    /// in {0,1}. Equivalent to b(x,y) + b(y,x) <= 1 for all pairs.
    pub fn is_cyclically_ordered(&self) -> Result<bool> {
        match &self.kind {
            PosetKind::Table(_) => {
                let elems = self.elements();
                for &x in &elems {
                    for &y in &elems {
                        if self.b(x, y)? + self.b(y, x)? > 1 {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            _ => Ok(true),
        }
    }

    /// Successor in the cyclic order, for carrier kinds that have one.
    pub fn successor(&self, e: Elem) -> Result<Elem> {
        self.check_contains(e)?;
        match &self.kind {
            PosetKind::Zn { n } => Ok(Elem(e.0 % n + 1)),
            PosetKind::Zwindow { hi, .. } => {
                if e.0 + 1 > *hi {
                    Err(Error::WindowTooSmall(format!(
                        "successor of {} leaves window",
                        e.0
                    )))
                } else {
                    Ok(Elem(e.0 + 1))
                }
            }
            PosetKind::ZmStarZ { m, hi, .. } => {
                if e.0 + m > *hi {
                    Err(Error::WindowTooSmall(format!(
                        "successor of {} leaves lambda window",
                        e.0
                    )))
                } else {
                    Ok(Elem(e.0 + m))
                }
            }
            PosetKind::ZxZ { i_hi, .. } => {
                let (s, i) = zxz_parts(e);
                if i + 1 > *i_hi {
                    Err(Error::WindowTooSmall(format!(
                        "successor of ({s},{i}) leaves window"
                    )))
                } else {
                    Ok(zxz_elem(s, i + 1))
                }
            }
            PosetKind::Table(_) => Err(Error::InvalidParams(
                "table-backed posets have no successor structure".into(),
            )),
        }
    }

    pub fn predecessor(&self, e: Elem) -> Result<Elem> {
        self.check_contains(e)?;
        match &self.kind {
            PosetKind::Zn { n } => Ok(Elem((e.0 - 2).rem_euclid(*n) + 1)),
            PosetKind::Zwindow { lo, .. } => {
                if e.0 - 1 < *lo {
                    Err(Error::WindowTooSmall(format!(
                        "predecessor of {} leaves window",
                        e.0
                    )))
                } else {
                    Ok(Elem(e.0 - 1))
                }
            }
            PosetKind::ZmStarZ { m, lo, .. } => {
                if e.0 - m < *lo {
                    Err(Error::WindowTooSmall(format!(
                        "predecessor of {} leaves lambda window",
                        e.0
                    )))
                } else {
                    Ok(Elem(e.0 - m))
                }
            }
            PosetKind::ZxZ { i_lo, .. } => {
                let (s, i) = zxz_parts(e);
                if i - 1 < *i_lo {
                    Err(Error::WindowTooSmall(format!(
                        "predecessor of ({s},{i}) leaves window"
                    )))
                } else {
                    Ok(zxz_elem(s, i - 1))
                }
            }
            PosetKind::Table(_) => Err(Error::InvalidParams(
                "table-backed posets have no successor structure".into(),
            )),
        }
    }

    /// Covering successor: the smallest covering element strictly above u
    /// lying over successor(u.elem).
    pub fn cov_succ(&self, u: CovElem) -> Result<CovElem> {
        let s = self.successor(u.elem)?;
        Ok(cov(s, u.level + self.b(u.elem, s)?))
    }

    /// Covering predecessor: inverse of cov_succ.
    pub fn cov_pred(&self, u: CovElem) -> Result<CovElem> {
        let p = self.predecessor(u.elem)?;
        Ok(cov(p, u.level - self.b(p, u.elem)?))
    }

    /// The successor automorphism phi(x) = x^+ for kinds that have one;
    /// for ZmStarZ this is the block shift Phi (whose m-th power is the
    /// successor), matching the twisted categories built on it.
    pub fn canonical_automorphism(&self) -> Result<AdmissibleAutomorphism> {
        match &self.kind {
            PosetKind::Zn { .. } | PosetKind::Zwindow { .. } | PosetKind::ZxZ { .. } => {
                Ok(AdmissibleAutomorphism {
                    kind: AutoKind::Successor,
                })
            }
            PosetKind::ZmStarZ { .. } => Ok(AdmissibleAutomorphism {
                kind: AutoKind::BlockShift,
            }),
            PosetKind::Table(_) => Err(Error::InvalidParams(
                "no canonical automorphism for table-backed posets".into(),
            )),
        }
    }

    /// Verify reducedness, non-negativity and the cocycle law over the
    /// window, reporting at most `max_violations` offenders.
    pub fn verify_cocycle(&self, max_violations: usize) -> Result<CocycleReport> {
        let elems = self.elements();
        let windowed = matches!(
            self.kind,
            PosetKind::Zwindow { .. } | PosetKind::ZmStarZ { .. } | PosetKind::ZxZ { .. }
        );
        if windowed && elems.len() < 4 {
            return Err(Error::WindowTooSmall(format!(
                "cocycle verification needs >= 4 window elements, have {}",
                elems.len()
            )));
        }
        let mut report = CocycleReport::default();
        'outer: for &x in &elems {
            for &y in &elems {
                let cxxy = self.cocycle(x, x, y)?;
                let cxyy = self.cocycle(x, y, y)?;
                if cxxy != 0 {
                    report.violations.push(CocycleViolation::NotReduced {
                        triple: (x, x, y),
                        value: cxxy,
                    });
                }
                if cxyy != 0 {
                    report.violations.push(CocycleViolation::NotReduced {
                        triple: (x, y, y),
                        value: cxyy,
                    });
                }
                if report.violations.len() >= max_violations {
                    break 'outer;
                }
            }
        }
        if report.violations.len() < max_violations {
            'neg: for &x in &elems {
                for &y in &elems {
                    for &z in &elems {
                        let c = self.cocycle(x, y, z)?;
                        if c < 0 {
                            report.violations.push(CocycleViolation::Negative {
                                triple: (x, y, z),
                                value: c,
                            });
                            if report.violations.len() >= max_violations {
                                break 'neg;
                            }
                        }
                    }
                }
            }
        }
        if report.violations.len() < max_violations {
            'law: for &w in &elems {
                for &x in &elems {
                    for &y in &elems {
                        for &z in &elems {
                            let delta = self.cocycle(x, y, z)? - self.cocycle(w, y, z)?
                                + self.cocycle(w, x, z)?
                                - self.cocycle(w, x, y)?;
                            if delta != 0 {
                                report.violations.push(CocycleViolation::Law {
                                    quad: (w, x, y, z),
                                    delta,
                                });
                                if report.violations.len() >= max_violations {
                                    break 'law;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Distance function from a basepoint: b(x,y) = c(x0, x, y).
    pub fn distance(&self, basepoint: Elem) -> Result<DistanceFunction> {
        self.check_contains(basepoint)?;
        let elems = self.elements();
        let mut table = HashMap::new();
        for &x in &elems {
            for &y in &elems {
                table.insert((x.0, y.0), self.cocycle(basepoint, x, y)?);
            }
        }
        Ok(DistanceFunction { basepoint, table })
    }
}

/// A distance function b with delta(b) = c, tabulated over the window.
#[derive(Debug, Clone)]
pub struct DistanceFunction {
    pub basepoint: Elem,
    table: HashMap<(i64, i64), i64>,
}

impl DistanceFunction {
    pub fn get(&self, x: Elem, y: Elem) -> Result<i64> {
        self.table
            .get(&(x.0, y.0))
            .copied()
            .ok_or(Error::NotInCarrier(x.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CocycleViolation {
    NotReduced {
        triple: (Elem, Elem, Elem),
        value: i64,
    },
    Negative {
        triple: (Elem, Elem, Elem),
        value: i64,
    },
    Law {
        quad: (Elem, Elem, Elem, Elem),
        delta: i64,
    },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CocycleReport {
    pub violations: Vec<CocycleViolation>,
}

impl CocycleReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) enum AutoKind {
    Identity,
    /// phi = successor (Zn, Zwindow, ZxZ).
    Successor,
    /// Phi on Z_m * Z: lambda -> lambda + 1.
    BlockShift,
    /// Explicit permutation with user-supplied lifting offsets a(x).
    Table {
        forward: HashMap<i64, i64>,
        inverse: HashMap<i64, i64>,
        offsets: HashMap<i64, i64>,
    },
}

/// An automorphism with a chosen lifting, phi~(x,0) = (phi x, a(x)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibleAutomorphism {
    pub(crate) kind: AutoKind,
}

impl AdmissibleAutomorphism {
    pub fn identity() -> Self {
        AdmissibleAutomorphism {
            kind: AutoKind::Identity,
        }
    }

    /// Explicit permutation with lifting offsets. Offsets are required:
    /// the paper's construction assumes a chosen lifting.
    pub fn from_table(pairs: &[(i64, i64)], offsets: &[(i64, i64)]) -> Result<Self> {
        let mut forward = HashMap::new();
        let mut inverse = HashMap::new();
        for &(x, y) in pairs {
            if forward.insert(x, y).is_some() {
                return Err(Error::InvalidParams(format!("duplicate map for {x}")));
            }
            if inverse.insert(y, x).is_some() {
                return Err(Error::InvalidParams(format!("not injective at {y}")));
            }
        }
        let offsets = offsets.iter().copied().collect();
        Ok(AdmissibleAutomorphism {
            kind: AutoKind::Table {
                forward,
                inverse,
                offsets,
            },
        })
    }

    pub fn apply(&self, poset: &CyclicPoset, e: Elem) -> Result<Elem> {
        match &self.kind {
            AutoKind::Identity => Ok(e),
            AutoKind::Successor => poset.successor(e),
            AutoKind::BlockShift => {
                if poset.contains(Elem(e.0 + 1)) {
                    Ok(Elem(e.0 + 1))
                } else {
                    Err(Error::WindowTooSmall(format!("Phi({}) leaves window", e.0)))
                }
            }
            AutoKind::Table { forward, .. } => forward
                .get(&e.0)
                .map(|&y| Elem(y))
                .ok_or(Error::NotInCarrier(e.0)),
        }
    }

    pub fn inverse(&self, poset: &CyclicPoset, e: Elem) -> Result<Elem> {
        match &self.kind {
            AutoKind::Identity => Ok(e),
            AutoKind::Successor => poset.predecessor(e),
            AutoKind::BlockShift => {
                if poset.contains(Elem(e.0 - 1)) {
                    Ok(Elem(e.0 - 1))
                } else {
                    Err(Error::WindowTooSmall(format!(
                        "Phi^-1({}) leaves window",
                        e.0
                    )))
                }
            }
            AutoKind::Table { inverse, .. } => inverse
                .get(&e.0)
                .map(|&y| Elem(y))
                .ok_or(Error::NotInCarrier(e.0)),
        }
    }

    /// The lifting offset a(x): phi~(x, 0) = (phi x, a(x)). Builder
    /// automorphisms use the minimal lifting a(x) = b(x, phi x).
    pub fn offset(&self, poset: &CyclicPoset, e: Elem) -> Result<i64> {
        match &self.kind {
            AutoKind::Table { offsets, .. } => {
                offsets.get(&e.0).copied().ok_or(Error::NotInCarrier(e.0))
            }
            _ => poset.b(e, self.apply(poset, e)?),
        }
    }

    /// Lift of phi to the covering: phi~(x, j) = (phi x, j + a(x)).
    pub fn cov_apply(&self, poset: &CyclicPoset, u: CovElem) -> Result<CovElem> {
        Ok(cov(
            self.apply(poset, u.elem)?,
            u.level + self.offset(poset, u.elem)?,
        ))
    }

    pub fn cov_inverse(&self, poset: &CyclicPoset, u: CovElem) -> Result<CovElem> {
        let x = self.inverse(poset, u.elem)?;
        Ok(cov(x, u.level - self.offset(poset, x)?))
    }
}

/// Check the admissibility chain (x,0) <= (phi x, a(x)) <= (phi^2 x, a(x)+a(phi x)) < (x,1)
/// for every window element where the chain is defined.
pub fn check_admissible(poset: &CyclicPoset, phi: &AdmissibleAutomorphism) -> Result<bool> {
    let mut checked = 0usize;
    for x in poset.elements() {
        let (fx, ffx) = match phi
            .apply(poset, x)
            .and_then(|fx| phi.apply(poset, fx).map(|ffx| (fx, ffx)))
        {
            Ok(v) => v,
            // window edge: skip elements whose images fall outside
            Err(Error::WindowTooSmall(_)) => continue,
            Err(e) => return Err(e),
        };
        let a_x = phi.offset(poset, x)?;
        let a_fx = phi.offset(poset, fx)?;
        let u0 = cov(x, 0);
        let u1 = cov(fx, a_x);
        let u2 = cov(ffx, a_x + a_fx);
        let u3 = cov(x, 1);
        if !(poset.covering_leq(u0, u1)?
            && poset.covering_leq(u1, u2)?
            && poset.covering_lt(u2, u3)?)
        {
            return Ok(false);
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::WindowTooSmall(
            "no window element admits the full admissibility chain".into(),
        ));
    }
    Ok(true)
}

/// The Frobenius cyclic poset X(Z, phi), its projective-injective subposet
/// X_0, the doubled poset, and the object-level Psi bijection report.
#[derive(Debug)]
pub struct FrobeniusPosetData {
    pub x_poset: CyclicPoset,
    /// Elements of x_poset that lie in X_0.
    pub x0: Vec<Elem>,
    pub doubled: CyclicPoset,
    /// Elements of doubled lying over X_0.
    pub doubled_x0: Vec<Elem>,
    pub psi_report: PsiReport,
}

/// One sigma-orbit of the covering of X(Z, phi), canonically represented by
/// a pair (first at level 0, second covering element).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct OrbitRep {
    x: i64,
    y: i64,
    k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiEntry {
    pub x: Elem,
    pub y: Elem,
    pub primed: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct PsiReport {
    /// Psi images of the doubled window orbits (interior only).
    pub images: Vec<PsiEntry>,
    /// Admitted E-descriptors over the interior window.
    pub expected: Vec<PsiEntry>,
    pub bijective: bool,
    pub missing: Vec<PsiEntry>,
    pub duplicated: Vec<PsiEntry>,
}

/// Build X(Z, phi), X_0, the doubled poset and the Psi object bijection
/// report for a cyclically ordered Z with admissible phi.
pub fn frobenius_poset(
    z: &CyclicPoset,
    phi: &AdmissibleAutomorphism,
) -> Result<FrobeniusPosetData> {
    if !z.is_cyclically_ordered()? {
        return Err(Error::NonCyclicOrder(
            "X(Z, phi) needs a totally cyclically ordered Z".into(),
        ));
    }
    let elems = z.elements();
    if elems.len() < 4 {
        return Err(Error::WindowTooSmall("need at least 4 elements".into()));
    }
    for (i, &x) in elems.iter().enumerate() {
        for &y in &elems[i + 1..] {
            if z.equivalent(x, y)? {
                return Err(Error::NonCyclicOrder(format!(
                    "distinct equivalent elements {} ~ {}: covering is not totally ordered",
                    z.label(x),
                    z.label(y)
                )));
            }
        }
    }
    if !check_admissible(z, phi)? {
        return Err(Error::NotAdmissible("phi fails the covering chain".into()));
    }

    // Enumerate valid pairs (a, b) with a = (x, 0):
    // phi~(a) <= b <= sigma phi~^{-1}(a).
    let mut pairs: Vec<OrbitRep> = Vec::new();
    let pair_ok = |x: Elem, y: Elem, k: i64| -> Result<bool> {
        let lo = phi.cov_apply(z, cov(x, 0))?;
        let inv = phi.cov_inverse(z, cov(x, 0))?;
        let hi = cov(inv.elem, inv.level + 1); // sigma phi~^{-1} a
        Ok(z.covering_leq(lo, cov(y, k))? && z.covering_leq(cov(y, k), hi)?)
    };
    for &x in &elems {
        if phi.apply(z, x).is_err() || phi.inverse(z, x).is_err() {
            continue;
        }
        for &y in &elems {
            for k in -1..=2 {
                if pair_ok(x, y, k)? {
                    pairs.push(OrbitRep { x: x.0, y: y.0, k });
                }
            }
        }
    }

    // Canonical representative of each sigma-orbit: for a rep (x, (y,k))
    // the partner rep with first coordinate at level 0 is (y, (x, 1-k)).
    let index_of: HashMap<i64, usize> = elems.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
    let key = |r: &OrbitRep| (index_of[&r.x], index_of[&r.y], r.k);
    let canonical = |r: OrbitRep| -> OrbitRep {
        let partner = OrbitRep {
            x: r.y,
            y: r.x,
            k: 1 - r.k,
        };
        if index_of.contains_key(&partner.x) && index_of.contains_key(&partner.y) {
            if key(&partner) < key(&r) {
                return partner;
            }
        }
        r
    };
    let mut orbits: Vec<OrbitRep> = pairs.iter().map(|&r| canonical(r)).collect();
    orbits.sort_by_key(|r| key(r));
    orbits.dedup();

    // b on orbits: smallest m >= 0 with u <= sigma^m v componentwise.
    let sigma_pow = |r: OrbitRep, m: i64| -> (CovElem, CovElem) {
        let j = m.div_euclid(2);
        if m.rem_euclid(2) == 0 {
            (cov(Elem(r.x), j), cov(Elem(r.y), r.k + j))
        } else {
            (cov(Elem(r.y), r.k + j), cov(Elem(r.x), j + 1))
        }
    };
    let orbit_b = |u: OrbitRep, v: OrbitRep| -> Result<i64> {
        let (ua, ub) = sigma_pow(u, 0);
        for m in 0..64 {
            let (va, vb) = sigma_pow(v, m);
            if z.covering_leq(ua, va)? && z.covering_leq(ub, vb)? {
                return Ok(m);
            }
        }
        Err(Error::WindowTooSmall(
            "orbit distance search exhausted".into(),
        ))
    };

    let n = orbits.len();
    let mut bmat = vec![0i64; n * n];
    for (i, &u) in orbits.iter().enumerate() {
        for (j, &v) in orbits.iter().enumerate() {
            bmat[i * n + j] = orbit_b(u, v)?;
        }
    }
    let mut cocycle = vec![0i64; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for zz in 0..n {
                let c = bmat[y * n + zz] - bmat[x * n + zz] + bmat[x * n + y];
                if c < 0 {
                    return Err(Error::WindowTooSmall(
                        "orbit window too small for a consistent cocycle".into(),
                    ));
                }
                cocycle[n * n * x + n * y + zz] = c;
            }
        }
    }
    let labels: Vec<String> = orbits
        .iter()
        .map(|r| {
            format!(
                "({},{}{})",
                z.label(Elem(r.x)),
                z.label(Elem(r.y)),
                if r.k == 1 { "+" } else { "" }
            )
        })
        .collect();
    let mut table = TableData {
        elems: (0..n as i64).collect(),
        labels,
        cocycle,
        index: HashMap::new(),
    };
    table.rebuild_index();
    let x_poset = CyclicPoset {
        kind: PosetKind::Table(table.clone()),
    };

    // X_0: pairs with b ~ phi~(a) or b ~ sigma phi~^{-1}(a).
    let mut x0 = Vec::new();
    for (i, r) in orbits.iter().enumerate() {
        let a0 = cov(Elem(r.x), 0);
        let b0 = cov(Elem(r.y), r.k);
        let fa = phi.cov_apply(z, a0)?;
        let inv = phi.cov_inverse(z, a0)?;
        let sfa = cov(inv.elem, inv.level + 1);
        if z.covering_equiv(b0, fa)? || z.covering_equiv(b0, sfa)? {
            x0.push(Elem(i as i64));
        }
    }

    // Doubled poset: two signed copies, order ignores the sign,
    // sigma(a,b)_e = (b, sigma a)_{-e}. Orbit reps: (x, y, k, sign) with
    // partner (y, x, 1-k, -sign).
    let mut signed: Vec<(OrbitRep, bool)> = Vec::new();
    for &r in &orbits {
        signed.push((r, false));
        // the partner-signed orbit: canonical rep among {(r,+), partner(r,-)}
        let partner = OrbitRep {
            x: r.y,
            y: r.x,
            k: 1 - r.k,
        };
        let use_partner = index_of.contains_key(&partner.x)
            && index_of.contains_key(&partner.y)
            && key(&partner) < key(&r);
        // the second orbit over r is (r, -) ~ (partner, +)
        if use_partner {
            signed.push((partner, false));
        } else {
            signed.push((r, true));
        }
    }
    signed.sort_by_key(|(r, s)| (key(r), *s));
    signed.dedup();
    let dn = signed.len();
    let mut dcocycle = vec![0i64; dn * dn * dn];
    let ub = |u: OrbitRep, v: OrbitRep| -> Result<i64> { orbit_b(u, v) };
    let mut dbmat = vec![0i64; dn * dn];
    for (i, &(u, _)) in signed.iter().enumerate() {
        for (j, &(v, _)) in signed.iter().enumerate() {
            dbmat[i * dn + j] = ub(u, v)?;
        }
    }
    for x in 0..dn {
        for y in 0..dn {
            for zz in 0..dn {
                let c = dbmat[y * dn + zz] - dbmat[x * dn + zz] + dbmat[x * dn + y];
                dcocycle[dn * dn * x + dn * y + zz] = c.max(0);
            }
        }
    }
    let dlabels: Vec<String> = signed
        .iter()
        .map(|(r, s)| {
            format!(
                "({},{}{}){}",
                z.label(Elem(r.x)),
                z.label(Elem(r.y)),
                if r.k == 1 { "+" } else { "" },
                if *s { "-" } else { "+" }
            )
        })
        .collect();
    let mut dtable = TableData {
        elems: (0..dn as i64).collect(),
        labels: dlabels,
        cocycle: dcocycle,
        index: HashMap::new(),
    };
    dtable.rebuild_index();
    let doubled = CyclicPoset {
        kind: PosetKind::Table(dtable),
    };
    let mut doubled_x0 = Vec::new();
    for (i, (r, _)) in signed.iter().enumerate() {
        let a0 = cov(Elem(r.x), 0);
        let b0 = cov(Elem(r.y), r.k);
        let fa = phi.cov_apply(z, a0)?;
        let inv = phi.cov_inverse(z, a0)?;
        let sfa = cov(inv.elem, inv.level + 1);
        if z.covering_equiv(b0, fa)? || z.covering_equiv(b0, sfa)? {
            doubled_x0.push(Elem(i as i64));
        }
    }

    // Psi object map on doubled orbits:
    //   psi(x,y)_+ = E(x,y)' when y ~ sigma phi~ x ~ sigma x, else E(x,y);
    //   psi(x,y)_- = psi(partner)_+.
    let interior = interior_elems(z);
    let mut images = Vec::new();
    for &(r, s) in &signed {
        let rep = if s {
            OrbitRep {
                x: r.y,
                y: r.x,
                k: 1 - r.k,
            }
        } else {
            r
        };
        if !interior.contains(&Elem(rep.x)) || !interior.contains(&Elem(rep.y)) {
            continue;
        }
        let a0 = cov(Elem(rep.x), 0);
        let b0 = cov(Elem(rep.y), rep.k);
        let sfa = {
            let fa = phi.cov_apply(z, a0)?;
            cov(fa.elem, fa.level + 1)
        };
        let sa = cov(Elem(rep.x), 1);
        let primed = z.covering_equiv(b0, sfa)? && z.covering_equiv(sfa, sa)?;
        images.push(PsiEntry {
            x: Elem(rep.x),
            y: Elem(rep.y),
            primed,
        });
    }
    images.sort_by_key(|e| (e.x.0, e.y.0, e.primed));

    let mut expected = Vec::new();
    for &x in &interior {
        for &y in &interior {
            let fx = phi.apply(z, x)?;
            let fix = phi.inverse(z, x)?;
            if z.cyclic_order_triple(fx, y, fix)? {
                expected.push(PsiEntry {
                    x,
                    y,
                    primed: false,
                });
            }
            if z.equivalent(x, fx)? && z.equivalent(fx, y)? {
                expected.push(PsiEntry { x, y, primed: true });
            }
        }
    }
    expected.sort_by_key(|e| (e.x.0, e.y.0, e.primed));

    let mut missing = Vec::new();
    let mut duplicated = Vec::new();
    let mut counts: HashMap<(i64, i64, bool), usize> = HashMap::new();
    for e in &images {
        *counts.entry((e.x.0, e.y.0, e.primed)).or_default() += 1;
    }
    for e in &expected {
        match counts.get(&(e.x.0, e.y.0, e.primed)) {
            None | Some(0) => missing.push(e.clone()),
            Some(1) => {}
            Some(_) => duplicated.push(e.clone()),
        }
    }
    let spurious = images
        .iter()
        .filter(|e| !expected.contains(e))
        .cloned()
        .collect::<Vec<_>>();
    let bijective = missing.is_empty() && duplicated.is_empty() && spurious.is_empty();
    let psi_report = PsiReport {
        images,
        expected,
        bijective,
        missing,
        duplicated,
    };

    Ok(FrobeniusPosetData {
        x_poset,
        x0,
        doubled,
        doubled_x0,
        psi_report,
    })
}

/// Window elements with enough margin that phi, phi^{-1} and one sigma-shift
/// stay inside the window. For finite Zn this is everything.
fn interior_elems(z: &CyclicPoset) -> Vec<Elem> {
    match &z.kind {
        PosetKind::Zn { .. } | PosetKind::Table(_) => z.elements(),
        PosetKind::Zwindow { lo, hi } => (*lo + 1..=*hi - 1).map(Elem).collect(),
        PosetKind::ZmStarZ { m, lo, hi } => (*lo + *m..=*hi - *m).map(Elem).collect(),
        PosetKind::ZxZ {
            s_lo,
            s_hi,
            i_lo,
            i_hi,
        } => {
            let mut out = Vec::new();
            for s in *s_lo..=*s_hi {
                for i in *i_lo + 1..=*i_hi - 1 {
                    out.push(zxz_elem(s, i));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: distance in the explicit Z covering of Z_n
    /// (integers with sigma = +n): smallest m with x <= y + m*n.
    fn zn_lift_distance(n: i64, x: i64, y: i64) -> i64 {
        let mut m = 0;
        while y + m * n < x {
            m += 1;
        }
        let mut mm = m;
        while y + (mm - 1) * n >= x {
            mm -= 1;
        }
        mm
    }

    #[test]
    fn z5_distance_matches_lift_oracle() {
        let p = CyclicPoset::zn(5).unwrap();
        let d = p.distance(Elem(1)).unwrap();
        for x in 1..=5 {
            for y in 1..=5 {
                assert_eq!(
                    d.get(Elem(x), Elem(y)).unwrap(),
                    zn_lift_distance(5, x, y),
                    "b({x},{y})"
                );
                // canonical b agrees with the explicit covering too
                assert_eq!(p.b(Elem(x), Elem(y)).unwrap(), zn_lift_distance(5, x, y));
            }
        }
        // spec example: b(i,j) = 0 if i <= j else 1
        assert_eq!(d.get(Elem(2), Elem(4)).unwrap(), 0);
        assert_eq!(d.get(Elem(4), Elem(2)).unwrap(), 1);
    }

    #[test]
    fn builders_verify() {
        for p in [
            CyclicPoset::zn(6).unwrap(),
            CyclicPoset::zwindow(-3, 4).unwrap(),
            CyclicPoset::zm_star_z(5, -10, 12).unwrap(),
            CyclicPoset::zxz(-2, 2, -2, 2).unwrap(),
        ] {
            assert!(p.verify_cocycle(10).unwrap().ok());
        }
        let z3 = CyclicPoset::zn(3).unwrap();
        let prod = CyclicPoset::product(&z3, &z3).unwrap();
        assert!(prod.verify_cocycle(10).unwrap().ok());
        let star = CyclicPoset::star(&z3, &PosetParam::Chain(3)).unwrap();
        assert!(star.verify_cocycle(10).unwrap().ok());
    }

    #[test]
    fn zn_cocycle_values_are_cyclic_order_indicators() {
        let p = CyclicPoset::zn(6).unwrap();
        for x in 1..=6 {
            for y in 1..=6 {
                for z in 1..=6 {
                    let c = p.cocycle(Elem(x), Elem(y), Elem(z)).unwrap();
                    assert!(c == 0 || c == 1);
                }
            }
        }
        assert!(p.is_cyclically_ordered().unwrap());
    }

    #[test]
    fn non_reduced_table_is_reported() {
        let p = CyclicPoset::table(vec![1, 2, 3], None, &[(1, 1, 2, 1)]).unwrap();
        let rep = p.verify_cocycle(10).unwrap();
        assert!(!rep.ok());
        assert!(matches!(
            rep.violations[0],
            CocycleViolation::NotReduced { .. }
        ));
    }

    #[test]
    fn product_cocycle_adds() {
        let z2 = CyclicPoset::zn(2).unwrap();
        let prod = CyclicPoset::product(&z2, &z2).unwrap();
        let e11 = CyclicPoset::product_elem(&z2, &z2, Elem(1), Elem(1)).unwrap();
        let e22 = CyclicPoset::product_elem(&z2, &z2, Elem(2), Elem(2)).unwrap();
        // oracle: sum of component cocycles, each c(1,2,1) = 1
        let c = prod.cocycle(e11, e22, e11).unwrap();
        assert_eq!(c, 2);
    }

    #[test]
    fn product_distance_is_componentwise_sum() {
        let z3 = CyclicPoset::zn(3).unwrap();
        let prod = CyclicPoset::product(&z3, &z3).unwrap();
        let base = CyclicPoset::product_elem(&z3, &z3, Elem(1), Elem(1)).unwrap();
        let d = prod.distance(base).unwrap();
        let u = CyclicPoset::product_elem(&z3, &z3, Elem(1), Elem(1)).unwrap();
        let v = CyclicPoset::product_elem(&z3, &z3, Elem(2), Elem(3)).unwrap();
        let d1 = z3.distance(Elem(1)).unwrap();
        assert_eq!(
            d.get(u, v).unwrap(),
            d1.get(Elem(1), Elem(2)).unwrap() + d1.get(Elem(1), Elem(3)).unwrap()
        );
    }

    #[test]
    fn covering_order_z5() {
        let p = CyclicPoset::zn(5).unwrap();
        assert!(p.covering_leq(cov(Elem(1), 0), cov(Elem(3), 0)).unwrap());
        assert!(!p.covering_leq(cov(Elem(3), 0), cov(Elem(1), 0)).unwrap());
        assert!(p.covering_leq(cov(Elem(3), 0), cov(Elem(1), 1)).unwrap());
        assert!(p.covering_leq(cov(Elem(1), 0), cov(Elem(1), 0)).unwrap());
        // sigma-equivariance
        for x in 1..=5 {
            for y in 1..=5 {
                for (j, k) in [(0, 0), (0, 1), (1, 0), (2, 3)] {
                    assert_eq!(
                        p.covering_leq(cov(Elem(x), j), cov(Elem(y), k)).unwrap(),
                        p.covering_leq(cov(Elem(x), j + 1), cov(Elem(y), k + 1))
                            .unwrap()
                    );
                }
            }
        }
    }

    /// Exhaustive lift-search oracle for the cyclic order predicate:
    /// exist j,k with (x,0) <= (y,j) <= (z,k) <= (x,1).
    fn cyclic_order_oracle(p: &CyclicPoset, x: Elem, y: Elem, z: Elem) -> bool {
        for j in -2..=3 {
            for k in -2..=3 {
                let ok = p.covering_leq(cov(x, 0), cov(y, j)).unwrap()
                    && p.covering_leq(cov(y, j), cov(z, k)).unwrap()
                    && p.covering_leq(cov(z, k), cov(x, 1)).unwrap();
                if ok {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn cyclic_order_triple_matches_lift_search() {
        let p = CyclicPoset::zn(5).unwrap();
        assert!(p.cyclic_order_triple(Elem(1), Elem(3), Elem(5)).unwrap());
        assert!(p.cyclic_order_triple(Elem(3), Elem(5), Elem(1)).unwrap());
        assert!(!p.cyclic_order_triple(Elem(3), Elem(1), Elem(5)).unwrap());
        for x in 1..=5 {
            for y in 1..=5 {
                for z in 1..=5 {
                    assert_eq!(
                        p.cyclic_order_triple(Elem(x), Elem(y), Elem(z)).unwrap(),
                        cyclic_order_oracle(&p, Elem(x), Elem(y), Elem(z)),
                        "triple ({x},{y},{z})"
                    );
                }
            }
        }
    }

    #[test]
    fn equivalence_cases() {
        let p = CyclicPoset::zn(5).unwrap();
        assert!(!p.equivalent(Elem(1), Elem(2)).unwrap());
        assert!(p.equivalent(Elem(3), Elem(3)).unwrap());
        let star = CyclicPoset::star(&p, &PosetParam::Chain(2)).unwrap();
        let e = CyclicPoset::star_elem(&p, &PosetParam::Chain(2), Elem(2), 1).unwrap();
        assert!(star.equivalent(e, e).unwrap());
    }

    #[test]
    fn composition_of_cyclic_order() {
        // if (x,y,z) and (z,w,x) are in cyclic order and x !~ z then (y,z,w) is
        let p = CyclicPoset::zn(7).unwrap();
        for x in 1..=7 {
            for y in 1..=7 {
                for z in 1..=7 {
                    for w in 1..=7 {
                        let (x, y, z, w) = (Elem(x), Elem(y), Elem(z), Elem(w));
                        if p.cyclic_order_triple(x, y, z).unwrap()
                            && p.cyclic_order_triple(z, w, x).unwrap()
                            && !p.equivalent(x, z).unwrap()
                        {
                            assert!(p.cyclic_order_triple(y, z, w).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_order_iff_cocycle_vanishes_or_equivalent() {
        let p = CyclicPoset::zn(6).unwrap();
        for x in 1..=6 {
            for y in 1..=6 {
                for z in 1..=6 {
                    let (x, y, z) = (Elem(x), Elem(y), Elem(z));
                    let lhs = p.cyclic_order_triple(x, y, z).unwrap();
                    let rhs = p.cocycle(x, y, z).unwrap() == 0 || p.equivalent(x, z).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn distance_roundtrip_delta_b_is_cocycle() {
        for p in [
            CyclicPoset::zn(6).unwrap(),
            CyclicPoset::zm_star_z(3, -6, 8).unwrap(),
        ] {
            let elems = p.elements();
            for &base in &elems {
                let d = p.distance(base).unwrap();
                for &x in &elems {
                    assert_eq!(d.get(x, x).unwrap(), 0);
                    for &y in &elems {
                        for &z in &elems {
                            let delta =
                                d.get(y, z).unwrap() - d.get(x, z).unwrap() + d.get(x, y).unwrap();
                            assert_eq!(delta, p.cocycle(x, y, z).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cocycle_recomputed_from_order_is_independent_of_section() {
        // recompute b'(x,y) = min m with (x,0) <= sigma^m (y,0); delta b' = c
        let p = CyclicPoset::zn(6).unwrap();
        let elems = p.elements();
        let bprime = |x: Elem, y: Elem| -> i64 {
            (0..12)
                .find(|&m| p.covering_leq(cov(x, 0), cov(y, m)).unwrap())
                .unwrap()
        };
        for &x in &elems {
            for &y in &elems {
                for &z in &elems {
                    assert_eq!(
                        bprime(y, z) - bprime(x, z) + bprime(x, y),
                        p.cocycle(x, y, z).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn zmstar_lambda_coordinates() {
        // lambda(x_1^3) = 5*1 + 3 = 8 for m = 5
        assert_eq!(zmstar_elem(5, 3, 1), Elem(8));
        assert_eq!(zmstar_parts(5, Elem(8)), (3, 1));
        // the convention x_k^{p+m} = x_{k+1}^p is built into the encoding
        assert_eq!(zmstar_elem(5, 3 + 5, 0), zmstar_elem(5, 3, 1));
        let p = CyclicPoset::zm_star_z(5, -20, 20).unwrap();
        // successor of x_k^p is x_{k+1}^p, i.e. lambda + m
        assert_eq!(p.successor(Elem(8)).unwrap(), Elem(13));
    }

    #[test]
    fn successor_automorphisms_are_admissible() {
        let p = CyclicPoset::zn(6).unwrap();
        let phi = p.canonical_automorphism().unwrap();
        assert!(check_admissible(&p, &phi).unwrap());
        // offsets: a = (0,0,0,0,0,1)
        for x in 1..=5 {
            assert_eq!(phi.offset(&p, Elem(x)).unwrap(), 0);
        }
        assert_eq!(phi.offset(&p, Elem(6)).unwrap(), 1);

        let pm = CyclicPoset::zm_star_z(4, -12, 12).unwrap();
        let bigphi = pm.canonical_automorphism().unwrap();
        assert!(check_admissible(&pm, &bigphi).unwrap());

        let pz = CyclicPoset::zwindow(-5, 5).unwrap();
        assert!(check_admissible(&pz, &pz.canonical_automorphism().unwrap()).unwrap());

        let pxz = CyclicPoset::zxz(-2, 2, -3, 3).unwrap();
        assert!(check_admissible(&pxz, &pxz.canonical_automorphism().unwrap()).unwrap());
    }

    #[test]
    fn shift_by_three_on_z6_is_not_admissible() {
        let p = CyclicPoset::zn(6).unwrap();
        let pairs: Vec<(i64, i64)> = (1..=6).map(|i| (i, (i + 2) % 6 + 1)).collect();
        let offsets: Vec<(i64, i64)> = (1..=6)
            .map(|i| (i, if i + 3 > 6 { 1 } else { 0 }))
            .collect();
        let phi = AdmissibleAutomorphism::from_table(&pairs, &offsets).unwrap();
        // phi^2 x = x + 6 = sigma x violates strictness
        assert!(!check_admissible(&p, &phi).unwrap());
    }

    #[test]
    fn identity_is_admissible() {
        let p = CyclicPoset::zn(5).unwrap();
        assert!(check_admissible(&p, &AdmissibleAutomorphism::identity()).unwrap());
    }

    #[test]
    fn frobenius_poset_z6() {
        let z = CyclicPoset::zn(6).unwrap();
        let phi = z.canonical_automorphism().unwrap();
        let data = frobenius_poset(&z, &phi).unwrap();
        // 15 unordered pairs in X, 30 in the doubled poset
        assert_eq!(data.x_poset.elements().len(), 15);
        assert_eq!(data.doubled.elements().len(), 30);
        assert!(data.x_poset.verify_cocycle(5).unwrap().ok());
        assert!(data.doubled.verify_cocycle(5).unwrap().ok());
        // X_0: pairs (a, a+1) and (a, a+5): one sigma-orbit each per a, and
        // (a,a+1) ~ (a+1, a+6) are the same orbit, so 6 orbits total.
        assert_eq!(data.x0.len(), 6);
        assert!(data.psi_report.bijective);
        assert_eq!(data.psi_report.images.len(), 30);
    }

    #[test]
    fn frobenius_poset_membership_example() {
        // Z = Z6, phi = +1: (1,3) in X since phi(1)=2 <= 3 <= sigma phi^{-1}(1) = 6
        let z = CyclicPoset::zn(6).unwrap();
        let phi = z.canonical_automorphism().unwrap();
        let lo = phi.cov_apply(&z, cov(Elem(1), 0)).unwrap();
        let inv = phi.cov_inverse(&z, cov(Elem(1), 0)).unwrap();
        let hi = cov(inv.elem, inv.level + 1);
        assert_eq!(lo, cov(Elem(2), 0));
        assert_eq!(hi, cov(Elem(6), 0));
        assert!(z.covering_leq(lo, cov(Elem(3), 0)).unwrap());
        assert!(z.covering_leq(cov(Elem(3), 0), hi).unwrap());
    }
}
