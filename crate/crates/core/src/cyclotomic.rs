//! Exact arithmetic in cyclotomic rings Z[zeta_n].
//!
//! Used to verify identities between local exponents and integral invariants
//! without floating point: `2cos(2*pi*r/s)` is represented as
//! `zeta^m + zeta^-m` in `Z[x]/Phi_L(x)` for a common level `L`, and
//! symmetric functions of such values are checked to be rational integers by
//! reducing modulo the cyclotomic polynomial.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial, little-endian coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn constant(c: i64) -> Self {
        IntPoly(vec![BigInt::from(c)]).trimmed()
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly(c)
    }

    pub fn from_coeffs(c: Vec<BigInt>) -> Self {
        IntPoly(c).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// The constant value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in other.0.iter().enumerate() {
            c[i] += x;
        }
        IntPoly(c).trimmed()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in other.0.iter().enumerate() {
            c[i] -= x;
        }
        IntPoly(c).trimmed()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly(c).trimmed()
    }

    /// Remainder after division by a monic divisor.
    pub fn rem_monic(&self, divisor: &Self) -> Self {
        assert!(
            divisor.0.last().is_some_and(One::is_one),
            "divisor must be monic"
        );
        let d = divisor.0.len() - 1;
        let mut r = self.0.clone();
        while r.len() > d {
            let lead = r.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = r.len() - d;
            for (i, c) in divisor.0[..d].iter().enumerate() {
                r[shift + i] -= &lead * c;
            }
        }
        IntPoly(r).trimmed()
    }

    /// Exact quotient by a monic divisor; panics if the division is inexact
    /// (only used internally where exactness is guaranteed).
    fn div_exact_monic(&self, divisor: &Self) -> Self {
        let d = divisor.0.len() - 1;
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.0.len().saturating_sub(d)];
        while r.len() > d {
            let lead = r.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = r.len() - d;
            for (i, c) in divisor.0[..d].iter().enumerate() {
                r[shift + i] -= &lead * c;
            }
            q[shift] = lead;
        }
        assert!(
            r.iter().all(Zero::is_zero),
            "inexact cyclotomic division"
        );
        IntPoly(q).trimmed()
    }
}

/// The n-th cyclotomic polynomial `Phi_n`, computed by exact division of
/// `x^n - 1` by the cyclotomic polynomials of the proper divisors of n.
pub fn cyclotomic_poly(n: u32) -> IntPoly {
    assert!(n >= 1);
    let mut num = IntPoly::monomial(n as usize).sub(&IntPoly::constant(1));
    for d in 1..n {
        if n % d == 0 {
            num = num.div_exact_monic(&cyclotomic_poly(d));
        }
    }
    num
}

/// An element of `Z[zeta_L]`, stored reduced mod `Phi_L`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclotomicElement {
    level: u32,
    poly: IntPoly,
}

/// The ring `Z[zeta_L] = Z[x]/Phi_L(x)`.
pub struct CyclotomicRing {
    level: u32,
    modulus: IntPoly,
}

impl CyclotomicRing {
    pub fn new(level: u32) -> Self {
        assert!(level >= 1);
        CyclotomicRing {
            level,
            modulus: cyclotomic_poly(level),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    fn reduce(&self, p: IntPoly) -> CyclotomicElement {
        CyclotomicElement {
            level: self.level,
            poly: p.rem_monic(&self.modulus),
        }
    }

    pub fn constant(&self, c: i64) -> CyclotomicElement {
        self.reduce(IntPoly::constant(c))
    }

    /// `zeta_L^k` for any integer exponent (negative exponents via
    /// `zeta^-1 = zeta^(L-1)`).
    pub fn zeta_pow(&self, k: i64) -> CyclotomicElement {
        let e = k.rem_euclid(i64::from(self.level)) as usize;
        self.reduce(IntPoly::monomial(e))
    }

    /// `2cos(2*pi*r/s) = zeta_L^(rL/s) + zeta_L^(-rL/s)`; requires `s | L`.
    pub fn two_cos(&self, r: i64, s: u32) -> Result<CyclotomicElement> {
        if s == 0 || self.level % s != 0 {
            return Err(Error::InvalidInput(format!(
                "denominator {s} does not divide cyclotomic level {}",
                self.level
            )));
        }
        let m = r * i64::from(self.level / s);
        Ok(self.add(&self.zeta_pow(m), &self.zeta_pow(-m)))
    }

    pub fn add(&self, a: &CyclotomicElement, b: &CyclotomicElement) -> CyclotomicElement {
        self.assert_level(a, b);
        self.reduce(a.poly.add(&b.poly))
    }

    pub fn sub(&self, a: &CyclotomicElement, b: &CyclotomicElement) -> CyclotomicElement {
        self.assert_level(a, b);
        self.reduce(a.poly.sub(&b.poly))
    }

    pub fn mul(&self, a: &CyclotomicElement, b: &CyclotomicElement) -> CyclotomicElement {
        self.assert_level(a, b);
        self.reduce(a.poly.mul(&b.poly))
    }

    fn assert_level(&self, a: &CyclotomicElement, b: &CyclotomicElement) {
        assert_eq!(a.level, self.level);
        assert_eq!(b.level, self.level);
    }
}

impl CyclotomicElement {
    /// The rational-integer value, when the element is in fact rational.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.poly.as_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_coeffs(n: u32) -> Vec<i64> {
        cyclotomic_poly(n)
            .coeffs()
            .iter()
            .map(|c| i64::try_from(c.clone()).unwrap())
            .collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(phi_coeffs(1), vec![-1, 1]);
        assert_eq!(phi_coeffs(2), vec![1, 1]);
        assert_eq!(phi_coeffs(4), vec![1, 0, 1]);
        assert_eq!(phi_coeffs(6), vec![1, -1, 1]);
        assert_eq!(phi_coeffs(12), vec![1, 0, -1, 0, 1]);
        // phi(24) = 8
        assert_eq!(cyclotomic_poly(24).degree(), 8);
    }

    #[test]
    fn two_cos_symmetric_functions() {
        // 2cos(pi/3) = 1: zeta_6 + zeta_6^-1 = 1
        let ring = CyclotomicRing::new(6);
        let t = ring.two_cos(1, 6).unwrap();
        assert_eq!(t.as_integer(), Some(BigInt::from(1)));

        // 2cos(2pi/5) + 2cos(4pi/5) = -1 while neither term is rational
        let ring = CyclotomicRing::new(5);
        let a = ring.two_cos(1, 5).unwrap();
        let b = ring.two_cos(2, 5).unwrap();
        assert!(a.as_integer().is_none());
        assert_eq!(ring.add(&a, &b).as_integer(), Some(BigInt::from(-1)));
        // and their product is also -1
        assert_eq!(ring.mul(&a, &b).as_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn two_cos_rejects_bad_level() {
        let ring = CyclotomicRing::new(6);
        assert!(ring.two_cos(1, 5).is_err());
    }
}
