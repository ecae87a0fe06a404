//! The coefficient ring k[t]/(t^N) over a prime field F_p, with exact
//! valuation tracking.
//!
//! Every morphism coefficient in the crate is a [`Scalar`]: a truncated
//! polynomial in the uniformizer `t`. Arithmetic is exact modulo t^N; the
//! checked multiplication reports when a product of nonzero scalars would
//! truncate to zero, so information loss is never silent.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The ring k[t]/(t^N) with k = F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarRing {
    prime: u32,
    precision: usize,
}

/// An element of k[t]/(t^N). Coefficient vector has length exactly N.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scalar {
    coeffs: Vec<u32>,
}

pub const DEFAULT_PRIME: u32 = 101;
pub const DEFAULT_PRECISION: usize = 8;

impl Default for ScalarRing {
    fn default() -> Self {
        ScalarRing::new(DEFAULT_PRIME, DEFAULT_PRECISION).unwrap()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p = p as u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ScalarRing {
    pub fn new(prime: u32, precision: usize) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidParams(format!("{prime} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidParams("precision must be >= 1".into()));
        }
        Ok(ScalarRing { prime, precision })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn zero(&self) -> Scalar {
        Scalar {
            coeffs: vec![0; self.precision],
        }
    }

    pub fn one(&self) -> Scalar {
        self.t_pow(0)
    }

    /// t^k, or zero when k >= N.
    pub fn t_pow(&self, k: usize) -> Scalar {
        let mut s = self.zero();
        if k < self.precision {
            s.coeffs[k] = 1;
        }
        s
    }

    /// c * t^k.
    pub fn monomial(&self, c: i64, k: usize) -> Scalar {
        let mut s = self.zero();
        if k < self.precision {
            s.coeffs[k] = c.rem_euclid(self.prime as i64) as u32;
        }
        s
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Scalar {
        let mut s = self.zero();
        for (i, &c) in coeffs.iter().take(self.precision).enumerate() {
            s.coeffs[i] = c.rem_euclid(self.prime as i64) as u32;
        }
        s
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let mut out = self.zero();
        for i in 0..self.precision {
            out.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % self.prime;
        }
        out
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let mut out = self.zero();
        for i in 0..self.precision {
            out.coeffs[i] = (a.coeffs[i] + self.prime - b.coeffs[i]) % self.prime;
        }
        out
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.sub(&self.zero(), a)
    }

    /// Product truncated at t^N. Exact as an operation in k[t]/(t^N).
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let mut out = self.zero();
        for i in 0..self.precision {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..self.precision - i {
                if b.coeffs[j] == 0 {
                    continue;
                }
                let v = out.coeffs[i + j] as u64 + a.coeffs[i] as u64 * b.coeffs[j] as u64;
                out.coeffs[i + j] = (v % self.prime as u64) as u32;
            }
        }
        out
    }

    /// Product that errors when two nonzero factors multiply below the
    /// precision floor. `extra_shift` accounts for a composition twist t^c.
    pub fn mul_checked(&self, a: &Scalar, b: &Scalar, extra_shift: usize) -> Result<Scalar> {
        match (a.valuation(), b.valuation()) {
            (Some(va), Some(vb)) if va + vb + extra_shift >= self.precision => {
                Err(Error::PrecisionExhausted(format!(
                    "product valuation {} + {} + {} >= precision {}",
                    va, vb, extra_shift, self.precision
                )))
            }
            _ => Ok(self.shift_up_lossy(&self.mul(a, b), extra_shift)),
        }
    }

    /// Multiply by t^k, dropping coefficients pushed past t^{N-1}.
    fn shift_up_lossy(&self, a: &Scalar, k: usize) -> Scalar {
        let mut out = self.zero();
        for i in 0..self.precision.saturating_sub(k) {
            out.coeffs[i + k] = a.coeffs[i];
        }
        out
    }

    /// Multiply by t^k, erroring if a nonzero coefficient would be lost.
    pub fn shift_up(&self, a: &Scalar, k: usize) -> Result<Scalar> {
        if k > 0 {
            for i in self.precision.saturating_sub(k)..self.precision {
                if a.coeffs[i] != 0 {
                    return Err(Error::PrecisionExhausted(format!(
                        "t^{k} shift pushes coefficient at t^{i} past precision {}",
                        self.precision
                    )));
                }
            }
        }
        Ok(self.shift_up_lossy(a, k))
    }

    /// Unit inverse, exact mod t^N.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.coeffs[0] == 0 {
            return Err(Error::NotUnit);
        }
        let c0_inv = mod_pow(a.coeffs[0] as u64, self.prime as u64 - 2, self.prime as u64) as u32;
        let mut inv = self.zero();
        inv.coeffs[0] = c0_inv;
        // v_n = -c0^{-1} * sum_{i=1..=n} a_i v_{n-i}
        for n in 1..self.precision {
            let mut acc = 0u64;
            for i in 1..=n {
                acc = (acc + a.coeffs[i] as u64 * inv.coeffs[n - i] as u64) % self.prime as u64;
            }
            let neg = (self.prime as u64 - acc) % self.prime as u64;
            inv.coeffs[n] = (neg * c0_inv as u64 % self.prime as u64) as u32;
        }
        Ok(inv)
    }

    /// Exact division a / b where b = t^v * unit. Requires val(a) >= v.
    /// The quotient is reported mod t^N with the unknowable top v
    /// coefficients set to zero; callers guard precision themselves.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        let vb = match b.valuation() {
            Some(v) => v,
            None => return Err(Error::NotUnit),
        };
        if let Some(va) = a.valuation() {
            if va < vb {
                return Err(Error::NotDivisible {
                    need: vb,
                    have: Some(va),
                });
            }
        } else {
            return Ok(self.zero());
        }
        let shifted = self.shift_down(a, vb);
        let unit = self.shift_down(b, vb);
        Ok(self.mul(&shifted, &self.inv(&unit)?))
    }

    fn shift_down(&self, a: &Scalar, k: usize) -> Scalar {
        let mut out = self.zero();
        for i in k..self.precision {
            out.coeffs[i - k] = a.coeffs[i];
        }
        out
    }

    pub fn coeff(&self, a: &Scalar, k: usize) -> u32 {
        if k < self.precision {
            a.coeffs[k]
        } else {
            0
        }
    }

    pub fn scale(&self, a: &Scalar, c: i64) -> Scalar {
        let c = c.rem_euclid(self.prime as i64) as u64;
        let mut out = self.zero();
        for i in 0..self.precision {
            out.coeffs[i] = (a.coeffs[i] as u64 * c % self.prime as u64) as u32;
        }
        out
    }

    pub fn format(&self, a: &Scalar) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    /// Smallest exponent with nonzero coefficient, None for the zero scalar.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({:?})", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> ScalarRing {
        ScalarRing::default()
    }

    #[test]
    fn unit_inverse_is_exact() {
        let r = ring();
        let u = r.from_coeffs(&[3, 5, 0, 7, 1, 0, 0, 99]);
        let v = r.inv(&u).unwrap();
        assert_eq!(r.mul(&u, &v), r.one());
    }

    #[test]
    fn non_unit_has_no_inverse() {
        let r = ring();
        let t = r.t_pow(1);
        assert!(matches!(r.inv(&t), Err(Error::NotUnit)));
    }

    #[test]
    fn checked_mul_flags_truncation() {
        let r = ring();
        let a = r.t_pow(4);
        let b = r.t_pow(4);
        assert!(matches!(
            r.mul_checked(&a, &b, 0),
            Err(Error::PrecisionExhausted(_))
        ));
        assert!(matches!(
            r.mul_checked(&r.one(), &r.t_pow(5), 3),
            Err(Error::PrecisionExhausted(_))
        ));
        assert_eq!(r.mul_checked(&a, &r.t_pow(3), 0).unwrap(), r.t_pow(7));
    }

    #[test]
    fn div_exact_recovers_factor() {
        let r = ring();
        let b = r.from_coeffs(&[0, 2, 9]); // t*(2 + 9t)
        let q = r.from_coeffs(&[5, 0, 1]);
        let a = r.mul(&b, &q);
        let got = r.div_exact(&a, &b).unwrap();
        // quotient is only known mod t^{N-1}; compare below that degree
        assert_eq!(got.coeffs()[..7], q.coeffs()[..7]);
        assert!(matches!(
            r.div_exact(&r.one(), &b),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn valuation_tracks_min_exponent() {
        let r = ring();
        assert_eq!(r.zero().valuation(), None);
        assert_eq!(r.t_pow(3).valuation(), Some(3));
        let s = r.sub(&r.t_pow(2), &r.t_pow(2));
        assert_eq!(s.valuation(), None);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        proptest::collection::vec(0i64..101, 8).prop_map(|v| ring().from_coeffs(&v))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            let r = ring();
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
            prop_assert_eq!(
                r.mul(&a, &r.add(&b, &c)),
                r.add(&r.mul(&a, &b), &r.mul(&a, &c))
            );
            prop_assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
            prop_assert_eq!(r.mul(&a, &r.one()), a.clone());
        }

        #[test]
        fn units_invert(a in arb_scalar()) {
            let r = ring();
            if a.is_unit() {
                let inv = r.inv(&a).unwrap();
                prop_assert_eq!(r.mul(&a, &inv), r.one());
            }
        }

        #[test]
        fn product_valuation_adds(a in arb_scalar(), b in arb_scalar()) {
            let r = ring();
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                let p = r.mul(&a, &b);
                if va + vb < r.precision() {
                    // leading coefficients multiply in a field: no cancellation
                    prop_assert_eq!(p.valuation(), Some(va + vb));
                } else {
                    prop_assert!(p.is_zero());
                }
            }
        }
    }
}
