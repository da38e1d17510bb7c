//! Exact 4x4 rational linear algebra over the symplectic group.
//!
//! Everything here is exact: entries are arbitrary-precision rationals, the
//! symplectic conditions are checked as identities, and no floating point is
//! used anywhere. Two alternating forms matter in practice: the standard
//! integral form [`standard_form`] and the Frobenius-basis form
//! [`frobenius_form`]; both satisfy `F^2 = -I`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `p/q` (panics on `q = 0`).
pub fn rat_frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a rational from decimal notation: `"5"`, `"-3"`, or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let make_err = || Error::InvalidInput(format!("malformed rational literal {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|_| make_err()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| make_err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| make_err())?;
            if q.is_zero() {
                return Err(make_err());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A dense 4x4 matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix4 {
    entries: [[Rational; 4]; 4],
}

impl ExactMatrix4 {
    /// Builds a matrix from a row-major entry array.
    pub fn new(entries: [[Rational; 4]; 4]) -> Self {
        ExactMatrix4 { entries }
    }

    /// Builds a matrix from row-major machine integers.
    pub fn from_i64(rows: [[i64; 4]; 4]) -> Self {
        ExactMatrix4 {
            entries: rows.map(|r| r.map(rat)),
        }
    }

    /// Builds a matrix entry by entry from a closure over (row, column).
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        ExactMatrix4 {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { rat(1) } else { rat(0) })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| rat(0))
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row][col] = value;
    }

    /// Row-major reference to all entries.
    pub fn rows(&self) -> &[[Rational; 4]; 4] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(Rational::is_integer)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..4)
                .map(|k| &self.entries[i][k] * &other.entries[k][j])
                .sum()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| &self.entries[i][j] + &other.entries[i][j])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| &self.entries[i][j] - &other.entries[i][j])
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(|i, j| s * &self.entries[i][j])
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(|i, j| -self.entries[i][j].clone())
    }

    /// Matrix-vector product (column vector convention).
    pub fn apply(&self, v: &[Rational; 4]) -> [Rational; 4] {
        std::array::from_fn(|i| (0..4).map(|j| &self.entries[i][j] * &v[j]).sum())
    }

    /// Exact inverse via Gauss-Jordan elimination.
    ///
    /// Errors with [`Error::InvalidInput`] on a singular matrix.
    pub fn inverse(&self) -> Result<Self> {
        let mut a: Vec<Vec<Rational>> = (0..4)
            .map(|i| {
                let mut row: Vec<Rational> = self.entries[i].to_vec();
                for j in 0..4 {
                    row.push(if i == j { rat(1) } else { rat(0) });
                }
                row
            })
            .collect();
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::InvalidInput("singular matrix has no inverse".into()))?;
            a.swap(col, pivot);
            let pv = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &pv;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..8 {
                        let sub = &f * &a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        Ok(Self::from_fn(|i, j| a[i][4 + j].clone()))
    }

    /// Integer power, using the exact inverse for negative exponents.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Rank over the rationals, by row elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Rational>> = self.entries.iter().map(|r| r.to_vec()).collect();
        let mut rank = 0;
        for col in 0..4 {
            if let Some(p) = (rank..4).find(|&r| !a[r][col].is_zero()) {
                a.swap(rank, p);
                for r in (rank + 1)..4 {
                    if !a[r][col].is_zero() {
                        let f = &a[r][col] / &a[rank][col];
                        for c in col..4 {
                            let sub = &f * &a[rank][c];
                            a[r][c] -= sub;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn det(&self) -> Rational {
        let mut a: Vec<Vec<Rational>> = self.entries.iter().map(|r| r.to_vec()).collect();
        let mut det = rat(1);
        for col in 0..4 {
            let Some(p) = (col..4).find(|&r| !a[r][col].is_zero()) else {
                return rat(0);
            };
            if p != col {
                a.swap(col, p);
                det = -det;
            }
            det *= &a[col][col];
            let pv = a[col][col].clone();
            for r in (col + 1)..4 {
                if !a[r][col].is_zero() {
                    let f = &a[r][col] / &pv;
                    for c in col..4 {
                        let sub = &f * &a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        det
    }
}

impl fmt::Debug for ExactMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix4({self})")
    }
}

impl fmt::Display for ExactMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rational(e))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Matrix literal wire format: 4 rows of 4 entries, each an integer or a
/// `"p/q"` string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Int(i64),
    Str(String),
}

impl Serialize for ExactMatrix4 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<EntryRepr>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        if e.is_integer() {
                            if let Ok(n) = i64::try_from(e.numer().clone()) {
                                return EntryRepr::Int(n);
                            }
                        }
                        EntryRepr::Str(format_rational(e))
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix4 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<EntryRepr>> = Vec::deserialize(deserializer)?;
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(D::Error::custom("matrix literal must be 4 rows of 4 entries"));
        }
        let mut m = ExactMatrix4::zero();
        for (i, row) in rows.into_iter().enumerate() {
            for (j, e) in row.into_iter().enumerate() {
                let v = match e {
                    EntryRepr::Int(n) => rat(n),
                    EntryRepr::Str(s) => parse_rational(&s).map_err(D::Error::custom)?,
                };
                m.set_entry(i, j, v);
            }
        }
        Ok(m)
    }
}

/// The standard alternating form on Z^4: `<e1,e3> = <e2,e4> = 1`.
pub fn standard_form() -> ExactMatrix4 {
    ExactMatrix4::from_i64([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
}

/// The alternating form in the Frobenius basis (antidiagonal 1,-1,1,-1).
pub fn frobenius_form() -> ExactMatrix4 {
    ExactMatrix4::from_i64([[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
}

/// Unipotent monodromy at 0 in the Frobenius basis: upper unitriangular with
/// superdiagonals 1, 1/2, 1/6.
pub fn frobenius_monodromy() -> ExactMatrix4 {
    let mut m = ExactMatrix4::identity();
    for i in 0..3 {
        m.set_entry(i, i + 1, rat(1));
    }
    m.set_entry(0, 2, rat_frac(1, 2));
    m.set_entry(1, 3, rat_frac(1, 2));
    m.set_entry(0, 3, rat_frac(1, 6));
    m
}

/// Tests `m^T F m = F` for the alternating form `F`.
pub fn is_symplectic(m: &ExactMatrix4, form: &ExactMatrix4) -> bool {
    m.transpose().mul(form).mul(m) == *form
}

/// Sign choice for [`symplectic_reflection`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ReflectionSign {
    Plus,
    Minus,
}

impl ReflectionSign {
    pub fn from_i8(s: i8) -> Result<Self> {
        match s {
            1 => Ok(ReflectionSign::Plus),
            -1 => Ok(ReflectionSign::Minus),
            other => Err(Error::InvalidInput(format!(
                "reflection sign must be +1 or -1, got {other}"
            ))),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            ReflectionSign::Plus => 1,
            ReflectionSign::Minus => -1,
        }
    }
}

/// A scalar of the form `c * sqrt(r)` with rational `c` and squarefree
/// radicand `r >= 1`. Radicand 1 denotes an ordinary rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticNumber {
    pub coeff: Rational,
    pub radicand: u32,
}

impl QuadraticNumber {
    pub fn rational(c: Rational) -> Self {
        QuadraticNumber { coeff: c, radicand: 1 }
    }

    pub fn new(coeff: Rational, radicand: u32) -> Result<Self> {
        if radicand == 0 {
            return Err(Error::InvalidInput("radicand must be >= 1".into()));
        }
        for p in 2..=radicand / 2 {
            if radicand % (p * p) == 0 {
                return Err(Error::InvalidInput(format!(
                    "radicand {radicand} is not squarefree"
                )));
            }
        }
        Ok(QuadraticNumber { coeff, radicand })
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Product with another quadratic number, when the result is rational.
    fn rational_product(&self, other: &Self) -> Option<Rational> {
        if self.is_zero() || other.is_zero() {
            return Some(rat(0));
        }
        if self.radicand == other.radicand {
            return Some(&self.coeff * &other.coeff * rat(self.radicand as i64));
        }
        None
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 || self.is_zero() {
            write!(f, "{}", format_rational(&self.coeff))
        } else {
            write!(f, "{}*sqrt({})", format_rational(&self.coeff), self.radicand)
        }
    }
}

/// A length-4 vector whose entries are quadratic numbers `c*sqrt(r)`.
///
/// Reflection vectors of the conifold cases live here: entries involve at most
/// `sqrt(2)` and all pairwise products are rational, so the reflection matrix
/// itself is rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticVector4(pub [QuadraticNumber; 4]);

impl QuadraticVector4 {
    /// A purely rational vector.
    pub fn from_rational(v: [Rational; 4]) -> Self {
        QuadraticVector4(v.map(QuadraticNumber::rational))
    }

    pub fn from_i64(v: [i64; 4]) -> Self {
        Self::from_rational(v.map(rat))
    }

    /// The rational outer product `v v^T`.
    ///
    /// Errors when some pairwise product is irrational (mixed radicands with
    /// nonzero coefficients).
    pub fn outer(&self) -> Result<ExactMatrix4> {
        let mut m = ExactMatrix4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let p = self.0[i].rational_product(&self.0[j]).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "outer product entry ({i},{j}) is irrational: {} * {}",
                        self.0[i], self.0[j]
                    ))
                })?;
                m.set_entry(i, j, p);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for QuadraticVector4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

// Wire format: 4 entries, each a `[coefficient, radicand]` pair with the
// coefficient as an integer-or-"p/q" string.
impl Serialize for QuadraticVector4 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(String, u32)> = self
            .0
            .iter()
            .map(|q| (format_rational(&q.coeff), q.radicand))
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadraticVector4 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(String, u32)> = Vec::deserialize(deserializer)?;
        if raw.len() != 4 {
            return Err(D::Error::custom("reflection vector must have 4 entries"));
        }
        let mut out = Vec::with_capacity(4);
        for (coeff, radicand) in raw {
            let c = parse_rational(&coeff).map_err(D::Error::custom)?;
            out.push(QuadraticNumber::new(c, radicand).map_err(D::Error::custom)?);
        }
        Ok(QuadraticVector4(out.try_into().expect("length checked")))
    }
}

/// The symplectic transvection attached to a vector `c` and scale `d`:
///
/// `T = I + sign * (1/d) * (F c) c^T`,
///
/// i.e. `v -> v + sign*(1/d)*(c^T v) * (F c)`. This is the matrix realization
/// of the reflection `v -> v - (1/d)<C,v>C` in the column-vector convention;
/// with `sign = Plus` it reproduces both the Frobenius-basis conifold
/// monodromy from `C = (d, 0, b, a)` and the printed integral reflection
/// matrices of the extra conifold generators.
pub fn symplectic_reflection(
    c: &QuadraticVector4,
    d: &Rational,
    form: &ExactMatrix4,
    sign: ReflectionSign,
) -> Result<ExactMatrix4> {
    if d.is_zero() {
        return Err(Error::InvalidInput("reflection scale d must be nonzero".into()));
    }
    let outer = c.outer()?;
    let mut scale = Rational::one() / d;
    if sign == ReflectionSign::Minus {
        scale = -scale;
    }
    Ok(ExactMatrix4::identity().add(&form.mul(&outer).scale(&scale)))
}

/// Recognizes a symplectic transvection: `t` preserves `form`, `(t-I)^2 = 0`,
/// and `rank(t-I) = 1`. The identity is not counted as a reflection.
pub fn is_symplectic_reflection(t: &ExactMatrix4, form: &ExactMatrix4) -> bool {
    if !is_symplectic(t, form) {
        return false;
    }
    let n = t.sub(&ExactMatrix4::identity());
    n.rank() == 1 && n.mul(&n) == ExactMatrix4::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_square_to_minus_identity() {
        for f in [standard_form(), frobenius_form()] {
            assert_eq!(f.mul(&f), ExactMatrix4::identity().neg());
            assert_eq!(f.transpose(), f.neg());
        }
    }

    #[test]
    fn inverse_of_frobenius_monodromy() {
        let m = frobenius_monodromy();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn frobenius_monodromy_preserves_frobenius_form() {
        assert!(is_symplectic(&frobenius_monodromy(), &frobenius_form()));
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rational("34/24").unwrap(), rat_frac(17, 12));
        assert_eq!(parse_rational("-5").unwrap(), rat(-5));
        assert_eq!(format_rational(&rat_frac(-3, 6)), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn matrix_literal_roundtrip() {
        let m = ExactMatrix4::from_fn(|i, j| rat_frac(i as i64 + 1, j as i64 + 2));
        let json = serde_json::to_string(&m).unwrap();
        let back: ExactMatrix4 = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
        let lit = "[[1,0,0,0],[\"1/2\",1,0,0],[0,0,1,0],[0,0,-7,1]]";
        let p: ExactMatrix4 = serde_json::from_str(lit).unwrap();
        assert_eq!(*p.entry(1, 0), rat_frac(1, 2));
        assert_eq!(*p.entry(3, 2), rat(-7));
        let bad = "[[1,0,0],[0,1,0],[0,0,1]]";
        assert!(serde_json::from_str::<ExactMatrix4>(bad).is_err());
    }

    #[test]
    fn reflection_rejects_mixed_radicands() {
        let v = QuadraticVector4([
            QuadraticNumber::new(rat(1), 2).unwrap(),
            QuadraticNumber::rational(rat(1)),
            QuadraticNumber::rational(rat(0)),
            QuadraticNumber::rational(rat(0)),
        ]);
        assert!(v.outer().is_err());
    }

    #[test]
    fn zero_vector_gives_identity_reflection() {
        let v = QuadraticVector4::from_i64([0, 0, 0, 0]);
        let t = symplectic_reflection(&v, &rat(3), &standard_form(), ReflectionSign::Plus).unwrap();
        assert!(t.is_identity());
        assert!(!is_symplectic_reflection(&t, &standard_form()));
    }

    #[test]
    fn rank_and_det() {
        assert_eq!(ExactMatrix4::identity().rank(), 4);
        assert_eq!(ExactMatrix4::zero().rank(), 0);
        assert_eq!(standard_form().det(), rat(1));
        let r = ExactMatrix4::from_i64([[1, 2, 3, 4], [2, 4, 6, 8], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(r.rank(), 3);
        assert_eq!(r.det(), rat(0));
    }
}
