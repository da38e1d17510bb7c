//! The operator catalog: 14 hypergeometric and 6 conifold Calabi-Yau cases.
//!
//! Each record carries the topological data `(d, k, c2H, c3)`, the local
//! exponents for the hypergeometric cases, and, for the conifold cases, the
//! extra monodromy reflection around the second conifold point. Loading
//! validates every record against the exact identities relating these data:
//! `k = d/6 + c2H/12`, the trigonometric characterization of `(d, k)`, the
//! discriminant as a product of the `N(r/s)` values, the symplectic reflection
//! reconstruction of each extra generator, and containment of the generators
//! in the congruence subgroup `Gamma(d, gcd(d, k))`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num::{BigInt, BigRational, BigUint, Integer, One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::CyclotomicRing;
use crate::error::{Error, Result};
use crate::matrix::{
    is_symplectic, is_symplectic_reflection, rat, standard_form, symplectic_reflection,
    ExactMatrix4, QuadraticVector4, Rational, ReflectionSign,
};

/// A reduced local exponent `r/s` with `0 < r < s`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct CyclotomicExponent {
    num: u32,
    den: u32,
}

impl CyclotomicExponent {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || num >= den || num.gcd(&den) != 1 {
            return Err(Error::InvalidInput(format!(
                "exponent must be a reduced fraction in (0,1), got {num}/{den}"
            )));
        }
        Ok(CyclotomicExponent { num, den })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let err = || Error::InvalidInput(format!("malformed exponent literal {s:?}"));
        let (r, q) = s.split_once('/').ok_or_else(err)?;
        let num = r.trim().parse().map_err(|_| err())?;
        let den = q.trim().parse().map_err(|_| err())?;
        Self::new(num, den)
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }

    /// The complementary exponent `1 - r/s`.
    pub fn complement(&self) -> Self {
        CyclotomicExponent {
            num: self.den - self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for CyclotomicExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for CyclotomicExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CyclotomicExponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        CyclotomicExponent::parse(&s).map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Hypergeometric,
    Conifold,
}

/// One Calabi-Yau operator case.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorRecord {
    pub aesz: u32,
    pub kind: OperatorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<[CyclotomicExponent; 4]>,
    pub d: u32,
    pub k: u32,
    #[serde(rename = "c2H")]
    pub c2h: i64,
    pub c3: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<u64>,
    /// Marks the single record whose printed `(d, k, c2H)` triple violates
    /// `k = d/6 + c2H/12`; validation then requires the violation.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub k_identity_anomaly: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_generators: Vec<ExactMatrix4>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reflection_vectors: Vec<QuadraticVector4>,
    #[serde(default = "default_reflection_sign")]
    pub reflection_sign: i8,
}

fn default_reflection_sign() -> i8 {
    1
}

impl OperatorRecord {
    /// The characteristic number `b = c2H / 24`.
    pub fn b(&self) -> Rational {
        Rational::new(BigInt::from(self.c2h), BigInt::from(24))
    }

    /// `Lambda = (7k - 2d) / 24`.
    pub fn lambda(&self) -> Rational {
        lambda_of(self.d, self.k)
    }

    pub fn gcd_dk(&self) -> u32 {
        self.d.gcd(&self.k)
    }

    /// The two integral generators `M(d,k)` and `N`.
    pub fn generators(&self) -> (ExactMatrix4, ExactMatrix4) {
        integral_generators(self.d, self.k)
    }

    /// `M`, `N`, and any extra conifold generators, in that order.
    pub fn all_generators(&self) -> Vec<ExactMatrix4> {
        let (m, n) = self.generators();
        let mut gens = vec![m, n];
        gens.extend(self.extra_generators.iter().cloned());
        gens
    }

    /// The first two local exponents, for the hypergeometric cases.
    pub fn alpha_pair(&self) -> Option<(CyclotomicExponent, CyclotomicExponent)> {
        self.alphas.map(|a| (a[0], a[1]))
    }

    /// Checks every record invariant, naming the failed check on error.
    pub fn validate(&self) -> Result<()> {
        let fail = |check: &str| {
            Err(Error::Data(format!(
                "catalog record AESZ {} fails check: {check}",
                self.aesz
            )))
        };
        if self.d == 0 || self.k == 0 {
            return fail("d and k must be positive");
        }

        // k = d/6 + c2H/12, except for the one flagged printed inconsistency.
        let derived_k = rat(i64::from(self.d)) / rat(6) + rat(self.c2h) / rat(12);
        let k_identity_holds = derived_k == rat(i64::from(self.k));
        if self.k_identity_anomaly {
            if k_identity_holds {
                return fail("flagged as k-identity anomaly but k = d/6 + c2H/12 holds");
            }
        } else if !k_identity_holds {
            return fail("k = d/6 + c2H/12");
        }

        let s = standard_form();
        let (m, n) = self.generators();
        for (name, g) in [("M", &m), ("N", &n)] {
            if !is_symplectic(g, &s) {
                return fail(&format!("generator {name} is symplectic"));
            }
        }
        if !gamma_membership(&m, self.d, self.gcd_dk())?
            || !gamma_membership(&n, self.d, self.gcd_dk())?
        {
            return fail("generators lie in Gamma(d, gcd(d,k))");
        }

        match self.kind {
            OperatorKind::Hypergeometric => {
                let Some(alphas) = &self.alphas else {
                    return fail("hypergeometric record carries exponents");
                };
                let mut complements: Vec<_> =
                    alphas.iter().map(CyclotomicExponent::complement).collect();
                let mut sorted = alphas.to_vec();
                sorted.sort();
                complements.sort();
                if sorted != complements {
                    return fail("exponents are closed under a -> 1 - a");
                }
                let (a1, a2) = self.alpha_pair().expect("checked above");
                if dk_from_exponents(&a1, &a2)? != (self.d, self.k) {
                    return fail("(d, k) matches the exponents");
                }
                let Some(disc) = self.discriminant else {
                    return fail("hypergeometric record carries a discriminant");
                };
                if discriminant(alphas)? != disc {
                    return fail("discriminant matches the exponent product");
                }
            }
            OperatorKind::Conifold => {
                if self.extra_generators.is_empty() {
                    return fail("conifold record carries an extra generator");
                }
            }
        }

        if self.extra_generators.len() != self.reflection_vectors.len() {
            return fail("one reflection vector per extra generator");
        }
        let sign = ReflectionSign::from_i8(self.reflection_sign)?;
        for (i, (g, v)) in self
            .extra_generators
            .iter()
            .zip(&self.reflection_vectors)
            .enumerate()
        {
            if !g.is_integral() {
                return fail(&format!("extra generator {i} is integral"));
            }
            if !is_symplectic_reflection(g, &s) {
                return fail(&format!("extra generator {i} is a symplectic reflection"));
            }
            let rebuilt = symplectic_reflection(v, &rat(1), &s, sign)?;
            if rebuilt != *g {
                return fail(&format!(
                    "extra generator {i} is reproduced by its reflection vector"
                ));
            }
        }
        Ok(())
    }
}

/// The validated list of records, in the published order.
#[derive(Clone, Debug)]
pub struct Catalog {
    records: Vec<OperatorRecord>,
}

impl Catalog {
    pub fn records(&self) -> &[OperatorRecord] {
        &self.records
    }

    pub fn by_aesz(&self, aesz: u32) -> Option<&OperatorRecord> {
        self.records.iter().find(|r| r.aesz == aesz)
    }

    /// The unique hypergeometric record with the given `(d, k)`.
    pub fn hypergeometric_by_dk(&self, d: u32, k: u32) -> Option<&OperatorRecord> {
        self.records
            .iter()
            .find(|r| r.kind == OperatorKind::Hypergeometric && r.d == d && r.k == k)
    }

    pub fn hypergeometric(&self) -> impl Iterator<Item = &OperatorRecord> {
        self.records
            .iter()
            .filter(|r| r.kind == OperatorKind::Hypergeometric)
    }

    fn from_json(json: &str) -> Result<Self> {
        let records: Vec<OperatorRecord> = serde_json::from_str(json)?;
        for r in &records {
            r.validate()?;
        }
        let catalog = Catalog { records };
        if catalog.hypergeometric().count() != 14 {
            return Err(Error::Data(
                "catalog must contain the 14 hypergeometric cases".into(),
            ));
        }
        Ok(catalog)
    }
}

/// Loads and validates a catalog file.
pub fn load_catalog(path: &Path) -> Result<Catalog> {
    Catalog::from_json(&std::fs::read_to_string(path)?)
}

/// The catalog bundled with the crate.
pub fn builtin_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        Catalog::from_json(include_str!("data/catalog.json"))
            .expect("bundled catalog is valid")
    })
}

/// The integral monodromy generators for parameters `(d, k)`:
///
/// `M` is the monodromy around 0, `N = I + E24` the conifold reflection.
pub fn integral_generators(d: u32, k: u32) -> (ExactMatrix4, ExactMatrix4) {
    let (d, k) = (i64::from(d), i64::from(k));
    let m = ExactMatrix4::from_i64([[1, 1, 0, 0], [0, 1, 0, 0], [d, d, 1, 0], [0, -k, -1, 1]]);
    let n = ExactMatrix4::from_i64([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]);
    (m, n)
}

/// The base change `A` from the normalised Frobenius basis to the integral
/// basis. Conjugation sends `M_F` to `M(d, k)` with `k = d/6 + 2b`; the result
/// is independent of the formal parameter `a`.
pub fn base_change(d: u32, b: &Rational, a: &Rational) -> Result<ExactMatrix4> {
    if d == 0 {
        return Err(Error::InvalidInput("base change needs d >= 1".into()));
    }
    let d = rat(i64::from(d));
    let mut m = ExactMatrix4::zero();
    m.set_entry(0, 2, rat(1));
    m.set_entry(1, 3, rat(1));
    m.set_entry(2, 1, d.clone());
    m.set_entry(2, 2, &d / rat(2));
    m.set_entry(2, 3, -b.clone());
    m.set_entry(3, 0, -d);
    m.set_entry(3, 2, -b.clone());
    m.set_entry(3, 3, -a.clone());
    Ok(m)
}

/// Recovers `(d, k)` from two local exponents: `2 - 2cos(2 pi a1)` and
/// `2 - 2cos(2 pi a2)` must be the roots of `X^2 - kX + d` with integer
/// coefficients. All arithmetic is exact in a cyclotomic ring.
pub fn dk_from_exponents(
    a1: &CyclotomicExponent,
    a2: &CyclotomicExponent,
) -> Result<(u32, u32)> {
    let level = a1.den.lcm(&a2.den);
    let ring = CyclotomicRing::new(level);
    let t1 = ring.two_cos(i64::from(a1.num), a1.den)?;
    let t2 = ring.two_cos(i64::from(a2.num), a2.den)?;
    let two = ring.constant(2);
    let d = ring.mul(&ring.sub(&two, &t1), &ring.sub(&two, &t2));
    let k = ring.sub(&ring.sub(&ring.constant(4), &t1), &t2);
    let (Some(d), Some(k)) = (d.as_integer(), k.as_integer()) else {
        return Err(Error::InvalidInput(format!(
            "exponents ({a1}, {a2}) do not give integral (d, k)"
        )));
    };
    let to_u32 = |x: BigInt, name: &str| {
        x.to_u32().filter(|&v| v >= 1).ok_or_else(|| {
            Error::InvalidInput(format!("exponents give non-positive {name} = {x}"))
        })
    };
    Ok((to_u32(d, "d")?, to_u32(k, "k")?))
}

/// `N(r/s) = m(s)` as a prime -> rational-exponent map. The value table is
/// authoritative: {2: 2^2, 3: 3^(3/2), 4: 2^3, 5: 5^(5/4), 6: 2^2 3^(3/2),
/// 8: 2^4, 10: 2^2 5^(5/4), 12: 2^3 3^(3/2)}.
fn m_of_denominator(s: u32) -> Result<BTreeMap<u32, Rational>> {
    let e = |p, q| Rational::new(BigInt::from(p), BigInt::from(q));
    let table: &[(u32, &[(u32, (i64, i64))])] = &[
        (2, &[(2, (2, 1))]),
        (3, &[(3, (3, 2))]),
        (4, &[(2, (3, 1))]),
        (5, &[(5, (5, 4))]),
        (6, &[(2, (2, 1)), (3, (3, 2))]),
        (8, &[(2, (4, 1))]),
        (10, &[(2, (2, 1)), (5, (5, 4))]),
        (12, &[(2, (3, 1)), (3, (3, 2))]),
    ];
    table
        .iter()
        .find(|(den, _)| *den == s)
        .map(|(_, factors)| {
            factors
                .iter()
                .map(|&(p, (num, den))| (p, e(num, den)))
                .collect()
        })
        .ok_or_else(|| Error::InvalidInput(format!("no N(r/s) value for denominator {s}")))
}

/// The discriminant `N = prod N(alpha_i)` of a hypergeometric case, computed
/// as an exact prime-exponent vector and asserted integral.
pub fn discriminant(alphas: &[CyclotomicExponent; 4]) -> Result<u64> {
    let mut complements: Vec<_> = alphas.iter().map(CyclotomicExponent::complement).collect();
    let mut sorted = alphas.to_vec();
    sorted.sort();
    complements.sort();
    if sorted != complements {
        return Err(Error::InvalidInput(
            "exponents must be closed under a -> 1 - a".into(),
        ));
    }
    let mut exponents: BTreeMap<u32, Rational> = BTreeMap::new();
    for a in alphas {
        for (p, e) in m_of_denominator(a.denominator())? {
            *exponents.entry(p).or_insert_with(|| rat(0)) += e;
        }
    }
    let mut n: u64 = 1;
    for (p, e) in exponents {
        if !e.is_integer() || e < rat(0) {
            return Err(Error::InvariantViolation(format!(
                "discriminant exponent of prime {p} is {e}, not a non-negative integer"
            )));
        }
        let e = e.to_integer().to_u32().ok_or_else(|| {
            Error::InvariantViolation(format!("discriminant exponent of {p} overflows"))
        })?;
        n = u64::from(p)
            .checked_pow(e)
            .and_then(|f| n.checked_mul(f))
            .ok_or_else(|| Error::InvariantViolation("discriminant overflows u64".into()))?;
    }
    Ok(n)
}

pub fn lambda_of(d: u32, k: u32) -> Rational {
    (rat(7) * rat(i64::from(k)) - rat(2) * rat(i64::from(d))) / rat(24)
}

/// Index prediction from the Lambda heuristic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexPrediction {
    Finite,
    Infinite,
    Boundary,
}

/// `Lambda = (7k - 2d)/24` together with its index prediction: infinite when
/// `Lambda > 1`, finite when `Lambda < 1`, boundary at equality.
pub fn lambda_classifier(d: u32, k: u32) -> (Rational, IndexPrediction) {
    let lambda = lambda_of(d, k);
    let prediction = match lambda.cmp(&rat(1)) {
        std::cmp::Ordering::Greater => IndexPrediction::Infinite,
        std::cmp::Ordering::Less => IndexPrediction::Finite,
        std::cmp::Ordering::Equal => IndexPrediction::Boundary,
    };
    (lambda, prediction)
}

/// The proved index status of the 14 hypergeometric groups.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexStatus {
    Finite,
    Infinite,
}

/// Proved status for a hypergeometric pair `(d, k)`, when it is one of the 14.
pub fn theorem_status(d: u32, k: u32) -> Option<IndexStatus> {
    const INFINITE: [(u32, u32); 7] =
        [(1, 4), (2, 4), (4, 5), (5, 5), (8, 6), (12, 7), (16, 8)];
    const FINITE: [(u32, u32); 7] =
        [(1, 3), (1, 2), (2, 3), (3, 4), (4, 4), (6, 5), (9, 6)];
    if INFINITE.contains(&(d, k)) {
        Some(IndexStatus::Infinite)
    } else if FINITE.contains(&(d, k)) {
        Some(IndexStatus::Finite)
    } else {
        None
    }
}

/// One row of the classification plot data.
#[derive(Clone, Debug, Serialize)]
pub struct PlotRow {
    pub aesz: u32,
    pub d: u32,
    pub k: u32,
    pub lambda: String,
    pub predicted: IndexPrediction,
    pub status: IndexStatus,
}

/// The underlying data of the classification figure: one row per
/// hypergeometric case with its `Lambda` value and proved status.
pub fn plot_data(catalog: &Catalog) -> Vec<PlotRow> {
    catalog
        .hypergeometric()
        .map(|r| {
            let (lambda, predicted) = lambda_classifier(r.d, r.k);
            PlotRow {
                aesz: r.aesz,
                d: r.d,
                k: r.k,
                lambda: crate::matrix::format_rational(&lambda),
                predicted,
                status: theorem_status(r.d, r.k).expect("catalog pair is one of the 14"),
            }
        })
        .collect()
}

/// Membership test for the congruence subgroup `Gamma(d1, d2)`, `d2 | d1`:
/// the matrix must match
///
/// ```text
/// (1 * * *)            (1 * * *)
/// (0 * * *)  mod d1,   (0 1 * *)  mod d2.
/// (0 0 1 0)            (0 0 1 0)
/// (0 * * *)            (0 0 * 1)
/// ```
pub fn gamma_membership(m: &ExactMatrix4, d1: u32, d2: u32) -> Result<bool> {
    check_gamma_moduli(d1, d2)?;
    if !m.is_integral() || !is_symplectic(m, &standard_form()) {
        return Err(Error::InvalidInput(
            "Gamma membership is only defined for integral symplectic matrices".into(),
        ));
    }
    let congruent = |i: usize, j: usize, target: i64, modulus: u32| -> bool {
        if modulus == 1 {
            return true;
        }
        let n = BigInt::from(modulus);
        (m.entry(i, j).numer() - BigInt::from(target)).mod_floor(&n).is_zero()
    };
    // mod d1: first column (1,0,0,0)^T and third row (0,0,1,0)
    let pattern1 = [(0, 0, 1), (1, 0, 0), (2, 0, 0), (3, 0, 0), (2, 1, 0), (2, 2, 1), (2, 3, 0)];
    // mod d2: additionally unipotent on the diagonal of rows 2 and 4
    let pattern2 = [(1, 1, 1), (3, 1, 0), (3, 3, 1)];
    Ok(pattern1
        .iter()
        .all(|&(i, j, t)| congruent(i, j, t, d1))
        && pattern1
            .iter()
            .chain(pattern2.iter())
            .all(|&(i, j, t)| congruent(i, j, t, d2)))
}

/// The Erdenberger index formula
/// `[Sp4(Z) : Gamma(d1,d2)] = d1^4 prod_{p|d1} (1-p^-4) * d2^2 prod_{p|d2} (1-p^-2)`.
pub fn gamma_index(d1: u32, d2: u32) -> Result<BigUint> {
    check_gamma_moduli(d1, d2)?;
    let mut index = BigRational::from_integer(BigInt::from(d1).pow(4) * BigInt::from(d2).pow(2));
    for p in prime_divisors(d1) {
        let p4 = BigInt::from(p).pow(4);
        index *= Rational::new(&p4 - BigInt::one(), p4);
    }
    for p in prime_divisors(d2) {
        let p2 = BigInt::from(p).pow(2);
        index *= Rational::new(&p2 - BigInt::one(), p2);
    }
    debug_assert!(index.is_integer());
    Ok(index
        .to_integer()
        .to_biguint()
        .expect("index is a positive integer"))
}

fn check_gamma_moduli(d1: u32, d2: u32) -> Result<()> {
    if d1 == 0 || d2 == 0 || d1 % d2 != 0 {
        return Err(Error::InvalidInput(format!(
            "Gamma(d1, d2) needs d2 | d1 and both positive, got ({d1}, {d2})"
        )));
    }
    Ok(())
}

pub(crate) fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}
