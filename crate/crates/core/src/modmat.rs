//! 4x4 matrices over Z/n and exact reduction from rational matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix4;
use num::{BigInt, Integer, Signed, ToPrimitive};

/// A 4x4 matrix over `Z/n`, entries stored as least nonnegative residues.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModMatrix4 {
    n: u32,
    e: [[u32; 4]; 4],
}

impl ModMatrix4 {
    /// Builds a matrix over `Z/n`, reducing the given entries. `n >= 2`.
    pub fn new(n: u32, entries: [[i64; 4]; 4]) -> Result<Self> {
        check_modulus(n)?;
        let m = i64::from(n);
        Ok(ModMatrix4 {
            n,
            e: entries.map(|row| row.map(|x| x.rem_euclid(m) as u32)),
        })
    }

    pub fn identity(n: u32) -> Result<Self> {
        check_modulus(n)?;
        let mut e = [[0u32; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = 1 % n;
        }
        Ok(ModMatrix4 { n, e })
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.e[row][col]
    }

    pub fn rows(&self) -> &[[u32; 4]; 4] {
        &self.e
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &x)| x == if i == j { 1 % self.n } else { 0 })
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = u64::from(self.n);
        let mut e = [[0u32; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc: u64 = 0;
                for k in 0..4 {
                    acc += u64::from(self.e[i][k]) * u64::from(other.e[k][j]);
                }
                e[i][j] = (acc % n) as u32;
            }
        }
        ModMatrix4 { n: self.n, e }
    }

    /// Matrix-vector product over `Z/n` (column vector convention).
    pub fn apply(&self, v: [u32; 4]) -> [u32; 4] {
        let n = u64::from(self.n);
        std::array::from_fn(|i| {
            let mut acc: u64 = 0;
            for j in 0..4 {
                acc += u64::from(self.e[i][j]) * u64::from(v[j]);
            }
            (acc % n) as u32
        })
    }

    /// Inverse via the adjugate; errors when `det` is not invertible mod n.
    pub fn inverse(&self) -> Result<Self> {
        let n = i64::from(self.n);
        let a: [[i64; 4]; 4] = self.e.map(|r| r.map(i64::from));
        let det = det4(&a).rem_euclid(n);
        let det_inv = mod_inverse(det, n).ok_or_else(|| {
            Error::InvalidInput(format!(
                "matrix determinant {det} is not invertible mod {n}"
            ))
        })?;
        let mut e = [[0u32; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                // adjugate entry (i,j) = cofactor (j,i)
                let c = cofactor(&a, j, i);
                let v = (c % n * det_inv).rem_euclid(n);
                e[i][j] = v as u32;
            }
        }
        Ok(ModMatrix4 { n: self.n, e })
    }

    /// Packed 16-byte key, one byte per entry; only defined for `n <= 256`.
    pub fn key(&self) -> Option<[u8; 16]> {
        if self.n > 256 {
            return None;
        }
        let mut k = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                k[i * 4 + j] = self.e[i][j] as u8;
            }
        }
        Some(k)
    }
}

impl fmt::Display for ModMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.e.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "] (mod {})", self.n)
    }
}

/// Largest supported modulus; keeps all intermediate products inside u64/i64.
pub const MAX_MODULUS: u32 = 1 << 20;

fn check_modulus(n: u32) -> Result<()> {
    if n < 2 || n > MAX_MODULUS {
        return Err(Error::InvalidInput(format!(
            "modulus must be in 2..={MAX_MODULUS}, got {n}"
        )));
    }
    Ok(())
}

fn minor3(a: &[[i64; 4]; 4], skip_row: usize, skip_col: usize) -> i64 {
    let mut m = [[0i64; 3]; 3];
    let mut r = 0;
    for i in 0..4 {
        if i == skip_row {
            continue;
        }
        let mut c = 0;
        for j in 0..4 {
            if j == skip_col {
                continue;
            }
            m[r][c] = a[i][j];
            c += 1;
        }
        r += 1;
    }
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn cofactor(a: &[[i64; 4]; 4], row: usize, col: usize) -> i64 {
    let sign = if (row + col) % 2 == 0 { 1 } else { -1 };
    sign * minor3(a, row, col)
}

fn det4(a: &[[i64; 4]; 4]) -> i64 {
    (0..4).map(|j| a[0][j] * cofactor(a, 0, j)).sum()
}

/// Extended-Euclid modular inverse of `a` mod `n` (both positive).
fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let (mut r0, mut r1) = (n, a.rem_euclid(n));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 == 1 {
        Some(t0.rem_euclid(n))
    } else {
        None
    }
}

/// Reduces an exact rational matrix mod `n`, mapping each entry `p/q` to
/// `p * q^-1`. Errors when some denominator shares a factor with `n`.
pub fn mod_reduce(m: &ExactMatrix4, n: u32) -> Result<ModMatrix4> {
    check_modulus(n)?;
    let big_n = BigInt::from(n);
    let mut e = [[0u32; 4]; 4];
    for (i, row) in e.iter_mut().enumerate() {
        for (j, out) in row.iter_mut().enumerate() {
            let entry = m.entry(i, j);
            let q = entry.denom().mod_floor(&big_n);
            let q = q.to_i64().expect("residue fits in i64");
            let Some(q_inv) = mod_inverse(q, i64::from(n)) else {
                return Err(Error::ModReduce {
                    modulus: n,
                    denominator: entry.denom().to_string(),
                });
            };
            let p = entry.numer().mod_floor(&big_n);
            let p = p.to_i64().expect("residue fits in i64");
            *out = ((p * q_inv).rem_euclid(i64::from(n))) as u32;
        }
    }
    Ok(ModMatrix4 { n, e })
}

/// Reduces a big integer to its least nonnegative residue mod `n`.
pub fn reduce_bigint(x: &BigInt, n: u32) -> u32 {
    let r = x.mod_floor(&BigInt::from(n));
    debug_assert!(!r.is_negative());
    r.to_u32().expect("residue fits in u32")
}
