//! Words in a fixed generating set of Sp4(Z) and the reverse word problem.
//!
//! The generating set is the one from Behr's presentation of Sp4(Z):
//! four elementary unipotents `xa, xb, xab, x2ab` and two Weyl elements
//! `wa, wb`. [`decompose`] solves constructive membership: it rewrites an
//! arbitrary integral symplectic matrix as a word in these six generators by
//! exact Euclidean column reduction, so that any concrete monodromy matrix
//! can be fed to coset enumeration as a subgroup generator.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use num::{BigInt, Integer, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{is_symplectic, standard_form, ExactMatrix4};

/// Number of group generators.
pub const GEN_COUNT: usize = 6;

/// The six generators of Behr's presentation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    Xa,
    Xb,
    Xab,
    X2ab,
    Wa,
    Wb,
}

impl Gen {
    pub const ALL: [Gen; GEN_COUNT] = [Gen::Xa, Gen::Xb, Gen::Xab, Gen::X2ab, Gen::Wa, Gen::Wb];

    pub fn index(self) -> usize {
        match self {
            Gen::Xa => 0,
            Gen::Xb => 1,
            Gen::Xab => 2,
            Gen::X2ab => 3,
            Gen::Wa => 4,
            Gen::Wb => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::Xa => "xa",
            Gen::Xb => "xb",
            Gen::Xab => "xab",
            Gen::X2ab => "x2ab",
            Gen::Wa => "wa",
            Gen::Wb => "wb",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Gen::ALL
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| Error::UnknownName(format!("generator {name:?}")))
    }

    /// The matrix of this generator in the integral symplectic group.
    pub fn matrix(self) -> ExactMatrix4 {
        let rows = match self {
            Gen::Xa => [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 1]],
            Gen::Xb => [[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]],
            Gen::Xab => [[1, 0, 0, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            Gen::X2ab => [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            Gen::Wa => [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
            Gen::Wb => [[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]],
        };
        ExactMatrix4::from_i64(rows)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The matrices of all six generators, indexed by [`Gen::index`].
pub fn behr_matrices() -> [ExactMatrix4; GEN_COUNT] {
    Gen::ALL.map(Gen::matrix)
}

/// A letter for coset enumeration: generator `g` maps to `2 * g.index()`,
/// its inverse to `2 * g.index() + 1`.
pub type Letter = u8;

pub fn inverse_letter(letter: Letter) -> Letter {
    letter ^ 1
}

/// A freely reduced word: a syllable list with nonzero exponents and no two
/// adjacent syllables on the same generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    syllables: Vec<(Gen, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    /// Appends `g^e`, merging and cancelling against the tail.
    pub fn push(&mut self, gen: Gen, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((g, e)) if *g == gen => {
                *e = e.checked_add(exp).expect("word exponent overflow");
                if *e == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((gen, exp)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(Gen, i64)] {
        &self.syllables
    }

    /// Word length counted in letters.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.syllables {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    /// The letter sequence, with exponents expanded. Intended for the short
    /// words handed to coset enumeration.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for &(g, e) in &self.syllables {
            let letter = 2 * g.index() as Letter + Letter::from(e < 0);
            for _ in 0..e.unsigned_abs() {
                out.push(letter);
            }
        }
        out
    }

    /// The matrix the word evaluates to, multiplying left to right.
    pub fn evaluate(&self) -> ExactMatrix4 {
        let mut acc = ExactMatrix4::identity();
        for &(g, e) in &self.syllables {
            let p = g.matrix().pow(e).expect("generators are invertible");
            acc = acc.mul(&p);
        }
        acc
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        for token in s.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                Some((name, e)) => (
                    name,
                    e.parse::<i64>().map_err(|_| {
                        Error::InvalidInput(format!("malformed exponent in token {token:?}"))
                    })?,
                ),
                None => (token, 1),
            };
            w.push(Gen::from_name(name)?, exp);
        }
        Ok(w)
    }
}

// Wire format: a word is a list of [name, exponent] pairs.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(&str, i64)> = self
            .syllables
            .iter()
            .map(|&(g, e)| (g.name(), e))
            .collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(String, i64)>::deserialize(deserializer)?;
        let mut w = Word::identity();
        for (name, e) in pairs {
            w.push(Gen::from_name(&name).map_err(D::Error::custom)?, e);
        }
        Ok(w)
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationFile {
    generators: Vec<String>,
    relators: Vec<Word>,
}

/// A finite presentation of Sp4(Z) on the six generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    relators: Vec<Word>,
}

impl Presentation {
    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        GEN_COUNT
    }

    fn from_json(json: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(json)?;
        let expected: Vec<String> = Gen::ALL.iter().map(|g| g.name().to_string()).collect();
        if file.generators != expected {
            return Err(Error::Data(format!(
                "presentation generators must be {expected:?}, got {:?}",
                file.generators
            )));
        }
        for (i, r) in file.relators.iter().enumerate() {
            if r.is_identity() {
                return Err(Error::Data(format!("relator {i} is the empty word")));
            }
            if !r.evaluate().is_identity() {
                return Err(Error::Data(format!(
                    "relator {i} ({r}) does not evaluate to the identity matrix"
                )));
            }
        }
        Ok(Presentation {
            relators: file.relators,
        })
    }
}

/// Loads a presentation file and checks every relator against the matrix
/// group.
pub fn load_presentation(path: &Path) -> Result<Presentation> {
    Presentation::from_json(&std::fs::read_to_string(path)?)
}

/// The bundled presentation of Sp4(Z).
pub fn behr_presentation() -> &'static Presentation {
    static PRESENTATION: OnceLock<Presentation> = OnceLock::new();
    PRESENTATION.get_or_init(|| {
        Presentation::from_json(include_str!("data/presentation.json"))
            .expect("bundled presentation is valid")
    })
}

/// Words evaluating to the monodromy generators `N` and `M(d, k)`.
pub fn monodromy_words(d: u32, k: u32) -> (Word, Word) {
    let g1 = Word::from_syllables([(Gen::Xb, 1)]);
    let s_inv = [(Gen::Wb, -1), (Gen::Wa, -1), (Gen::Wb, -1), (Gen::Wa, -1)];
    let mut g2 = Word::from_syllables(s_inv);
    g2.push(Gen::X2ab, -i64::from(d));
    g2.push(Gen::Xb, i64::from(k));
    g2.push(Gen::Xa, -1);
    g2.push(Gen::Wa, -3);
    g2.push(Gen::Xa, -1);
    for (g, e) in s_inv {
        g2.push(g, e);
    }
    (g1, g2)
}

/// An elementary row operation available during reduction: one of the four
/// unipotent generators, a conjugate of one by `S = (wa wb)^2`, or a central
/// sign `wa^2 = -I` / `wb^2 = diag(1,-1,1,-1)`.
#[derive(Clone, Copy, Debug)]
enum Move {
    Xa,
    Xb,
    Xab,
    X2ab,
    CXa,
    CXb,
    /// Not reached by the elimination order below; kept so the move set is
    /// the full S-conjugated quartet (exercised by `moves_match_their_words`).
    #[allow(dead_code)]
    CXab,
    CX2ab,
    WaSq,
    WbSq,
}

type Working = [[BigInt; 4]; 4];

fn row_addmul(w: &mut Working, dst: usize, src: usize, coeff: &BigInt) {
    for c in 0..4 {
        let t = &w[src][c] * coeff;
        w[dst][c] += t;
    }
}

fn negate_row(w: &mut Working, r: usize) {
    for c in 0..4 {
        let t = -std::mem::take(&mut w[r][c]);
        w[r][c] = t;
    }
}

impl Move {
    /// Left-multiplies the working matrix by this move raised to `m`.
    fn apply(self, w: &mut Working, m: i64) {
        let c = BigInt::from(m);
        match self {
            Move::Xa => {
                row_addmul(w, 0, 1, &c);
                row_addmul(w, 3, 2, &-&c);
            }
            Move::Xb => row_addmul(w, 1, 3, &c),
            Move::Xab => {
                row_addmul(w, 0, 3, &c);
                row_addmul(w, 1, 2, &c);
            }
            Move::X2ab => row_addmul(w, 0, 2, &c),
            Move::CXa => {
                row_addmul(w, 1, 0, &-&c);
                row_addmul(w, 2, 3, &c);
            }
            Move::CXb => row_addmul(w, 3, 1, &-&c),
            Move::CXab => {
                row_addmul(w, 2, 1, &-&c);
                row_addmul(w, 3, 0, &-&c);
            }
            Move::CX2ab => row_addmul(w, 2, 0, &-&c),
            Move::WaSq => {
                for r in 0..4 {
                    negate_row(w, r);
                }
            }
            Move::WbSq => {
                negate_row(w, 1);
                negate_row(w, 3);
            }
        }
    }

    /// The move raised to `m` as a word in the generators.
    fn word(self, m: i64) -> Word {
        let base = |g| Word::from_syllables([(g, m)]);
        let conj = |g| {
            Word::from_syllables([
                (Gen::Wa, 1),
                (Gen::Wb, 1),
                (Gen::Wa, 1),
                (Gen::Wb, 1),
                (g, m),
                (Gen::Wb, -1),
                (Gen::Wa, -1),
                (Gen::Wb, -1),
                (Gen::Wa, -1),
            ])
        };
        match self {
            Move::Xa => base(Gen::Xa),
            Move::Xb => base(Gen::Xb),
            Move::Xab => base(Gen::Xab),
            Move::X2ab => base(Gen::X2ab),
            Move::CXa => conj(Gen::Xa),
            Move::CXb => conj(Gen::Xb),
            Move::CXab => conj(Gen::Xab),
            Move::CX2ab => conj(Gen::X2ab),
            Move::WaSq => Word::from_syllables([(Gen::Wa, 2 * m)]),
            Move::WbSq => Word::from_syllables([(Gen::Wb, 2 * m)]),
        }
    }
}

struct Reduction {
    w: Working,
    recorded: Vec<(Move, i64)>,
}

impl Reduction {
    fn apply(&mut self, mv: Move, m: i64) {
        if m == 0 {
            return;
        }
        mv.apply(&mut self.w, m);
        self.recorded.push((mv, m));
    }

    fn entry_i64(&self, r: usize, c: usize) -> Result<i64> {
        self.w[r][c].to_i64().ok_or_else(|| {
            Error::Infeasible("matrix entry exceeds i64 during decomposition".into())
        })
    }

    /// Euclidean reduction of the column pair `(w[top][col], w[bot][col])`
    /// to `(gcd, 0)`. `op_top^m` adds `m` times the bottom row to the top,
    /// `op_bot^m` subtracts `m` times the top row from the bottom.
    fn euclid(&mut self, col: usize, top: usize, bot: usize, op_top: Move, op_bot: Move) -> Result<()> {
        loop {
            if self.w[bot][col].is_zero() {
                return Ok(());
            }
            if self.w[top][col].is_zero() {
                self.apply(op_top, 1);
                self.apply(op_bot, 1);
                return Ok(());
            }
            let q = self.w[top][col].div_floor(&self.w[bot][col]);
            if q.is_zero() {
                let q2 = self.w[bot][col].div_floor(&self.w[top][col]);
                let q2 = q2
                    .to_i64()
                    .ok_or_else(|| Error::Infeasible("decomposition quotient exceeds i64".into()))?;
                self.apply(op_bot, q2);
            } else {
                let q = (-q)
                    .to_i64()
                    .ok_or_else(|| Error::Infeasible("decomposition quotient exceeds i64".into()))?;
                self.apply(op_top, q);
            }
        }
    }

    fn expect(&self, cond: bool, what: &str) -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::InvariantViolation(format!(
                "decomposition invariant failed: {what}"
            )))
        }
    }
}

/// Rewrites an integral symplectic matrix as a word in the six generators.
///
/// The algorithm is exact Euclidean reduction: clear the first column to
/// `e1` with unipotent row operations and their `S`-conjugates, then the
/// third column to `e3`, then finish off the residual `SL2` block in rows
/// two and four. The inverses of the recorded operations, in order, give
/// the word.
pub fn decompose(m: &ExactMatrix4) -> Result<Word> {
    if !m.is_integral() {
        return Err(Error::InvalidInput(
            "only integral matrices can be decomposed".into(),
        ));
    }
    if !is_symplectic(m, &standard_form()) {
        return Err(Error::InvalidInput(
            "only symplectic matrices can be decomposed".into(),
        ));
    }
    let mut red = Reduction {
        w: std::array::from_fn(|r| std::array::from_fn(|c| m.entry(r, c).to_integer())),
        recorded: Vec::new(),
    };

    // Stage 1: first column to e1.
    red.euclid(0, 0, 2, Move::X2ab, Move::CX2ab)?;
    red.euclid(0, 1, 3, Move::Xb, Move::CXb)?;
    red.euclid(0, 0, 1, Move::Xa, Move::CXa)?;
    if red.w[0][0] == BigInt::from(-1) {
        red.apply(Move::WaSq, 1);
    }
    red.expect(
        red.w[0][0] == BigInt::from(1)
            && (1..4).all(|r| red.w[r][0].is_zero()),
        "first column reduces to e1",
    )?;

    // Stage 2: third column to e3. Symplectic pairing with e1 forces the
    // third entry of this column to be 1 already.
    red.expect(red.w[2][2] == BigInt::from(1), "pivot of third column is 1")?;
    let u1 = red.entry_i64(0, 2)?;
    red.apply(Move::X2ab, -u1);
    red.euclid(2, 1, 3, Move::Xb, Move::CXb)?;
    let g = red.entry_i64(1, 2)?;
    red.apply(Move::Xab, -g);
    red.expect(
        red.w[2][2] == BigInt::from(1) && [0usize, 1, 3].iter().all(|&r| red.w[r][2].is_zero()),
        "third column reduces to e3",
    )?;

    // Stage 3: the residual SL2 block in rows and columns two and four.
    red.euclid(1, 1, 3, Move::Xb, Move::CXb)?;
    if red.w[1][1] == BigInt::from(-1) {
        red.apply(Move::WbSq, 1);
    }
    let b = red.entry_i64(1, 3)?;
    red.apply(Move::Xb, -b);
    let identity: Working = std::array::from_fn(|r| std::array::from_fn(|c| BigInt::from(u64::from(r == c))));
    red.expect(red.w == identity, "reduction reaches the identity")?;

    // The recorded moves g_1 .. g_t satisfy (g_t ... g_1) m = 1, so
    // m = g_1^-1 g_2^-1 ... g_t^-1.
    let mut word = Word::identity();
    for (mv, e) in red.recorded {
        word = word.concat(&mv.word(e).inverse());
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_catalog, integral_generators};
    use crate::matrix::rat;

    #[test]
    fn generator_matrices_are_symplectic() {
        let s = standard_form();
        for g in Gen::ALL {
            assert!(is_symplectic(&g.matrix(), &s), "{g} is symplectic");
        }
        let wa = Gen::Wa.matrix();
        assert_eq!(wa.mul(&wa), ExactMatrix4::identity().scale(&rat(-1)));
        let wawb = wa.mul(&Gen::Wb.matrix());
        assert_eq!(wawb.mul(&wawb), s);
    }

    #[test]
    fn bundled_presentation_has_18_valid_relators() {
        let p = behr_presentation();
        assert_eq!(p.relators().len(), 18);
        assert_eq!(p.generator_count(), GEN_COUNT);
    }

    #[test]
    fn word_parse_format_roundtrip() {
        let w: Word = "xa^2 wb^-1 x2ab".parse().unwrap();
        assert_eq!(w.to_string(), "xa^2 wb^-1 x2ab");
        assert_eq!(w.letter_len(), 4);
        assert_eq!(w.letters(), vec![0, 0, 11, 6]);
        let cancel: Word = "wa xb xb^-1 wa^-1".parse().unwrap();
        assert!(cancel.is_identity());
        assert_eq!(cancel.to_string(), "1");
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
        assert!("zz^2".parse::<Word>().is_err());
        assert!("xa^x".parse::<Word>().is_err());
    }

    #[test]
    fn word_inverse_and_concat() {
        let w: Word = "xa wb^2 xab^-3".parse().unwrap();
        assert!(w.concat(&w.inverse()).is_identity());
        assert_eq!(w.inverse().to_string(), "xab^3 wb^-2 xa^-1");
        assert!(w.evaluate().mul(&w.inverse().evaluate()).is_identity());
    }

    #[test]
    fn monodromy_words_evaluate_to_generators() {
        for &(d, k) in &[(1, 2), (2, 3), (5, 5), (16, 8), (6, 4), (3, 7)] {
            let (g1, g2) = monodromy_words(d, k);
            let (m, n) = integral_generators(d, k);
            assert_eq!(g1.evaluate(), n, "g1 = N at ({d},{k})");
            assert_eq!(g2.evaluate(), m, "g2 = M at ({d},{k})");
        }
    }

    #[test]
    fn moves_match_their_words() {
        use super::Move;
        let moves = [
            Move::Xa,
            Move::Xb,
            Move::Xab,
            Move::X2ab,
            Move::CXa,
            Move::CXb,
            Move::CXab,
            Move::CX2ab,
            Move::WaSq,
            Move::WbSq,
        ];
        for mv in moves {
            for m in [1i64, -1, 3] {
                let mut w: Working = std::array::from_fn(|r| {
                    std::array::from_fn(|c| BigInt::from(u64::from(r == c)))
                });
                mv.apply(&mut w, m);
                let from_rows = ExactMatrix4::from_fn(|r, c| {
                    crate::matrix::Rational::from_integer(w[r][c].clone())
                });
                assert_eq!(mv.word(m).evaluate(), from_rows, "{mv:?}^{m}");
            }
        }
    }

    #[test]
    fn decompose_roundtrips_on_catalog_matrices() {
        for record in builtin_catalog().records() {
            for g in record.all_generators() {
                let word = decompose(&g).unwrap();
                assert_eq!(word.evaluate(), g, "AESZ {}", record.aesz);
            }
        }
    }

    #[test]
    fn decompose_special_elements() {
        assert!(decompose(&ExactMatrix4::identity()).unwrap().is_identity());
        let minus_one = ExactMatrix4::identity().scale(&rat(-1));
        let w = decompose(&minus_one).unwrap();
        assert_eq!(w.evaluate(), minus_one);
        let s = standard_form();
        assert_eq!(decompose(&s).unwrap().evaluate(), s);
        for g in Gen::ALL {
            assert_eq!(decompose(&g.matrix()).unwrap().evaluate(), g.matrix());
        }
    }

    #[test]
    fn decompose_rejects_bad_input() {
        let not_symplectic =
            ExactMatrix4::from_i64([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 1]]);
        assert!(decompose(&not_symplectic).is_err());
        let mut fractional = ExactMatrix4::identity();
        fractional.set_entry(0, 2, crate::matrix::rat_frac(1, 2));
        assert!(decompose(&fractional).is_err());
    }
}
