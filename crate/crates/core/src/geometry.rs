//! The finite symplectic geometry of (F_2)^4 behind the mod-2 analysis.
//!
//! Sp4(F_2) is isomorphic to S_6. The 15 nonzero vectors play the role of
//! the 15 transpositions; the six pentads (five-tuples of pairwise
//! non-orthogonal points), the ten synthemes (pairs of perpendicular
//! hyperbolic lines) and the six line pentads (spreads of isotropic lines)
//! are the three classical families of objects the group permutes. The
//! pentad action realises the isomorphism with S_6; the line pentads
//! realise the outer automorphism.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::catalog::integral_generators;
use crate::error::{Error, Result};
use crate::modgroup::bfs_elements;
use crate::modmat::{mod_reduce, ModMatrix4};

/// A nonzero point of (F_2)^4, encoded as `v1*8 + v2*4 + v3*2 + v4`
/// (values 1 through 15, letters `a` through `o`).
pub type Point = u8;

pub const POINT_COUNT: usize = 15;

/// The six pentads, in the standard labelling 1..6.
pub const PENTADS: [[Point; 5]; 6] = [
    [1, 4, 7, 13, 15],  // a d g m o
    [1, 5, 6, 12, 14],  // a e f l n
    [2, 8, 11, 14, 15], // b h k n o
    [2, 9, 10, 12, 13], // b i j l m
    [3, 4, 5, 9, 11],   // c d e i k
    [3, 6, 7, 8, 10],   // c f g h j
];

/// The ten synthemes I..X, each a hyperbolic line with its perpendicular
/// line; triples sorted, smaller triple first.
pub const SYNTHEMES: [[[Point; 3]; 2]; 10] = [
    [[1, 4, 5], [2, 8, 10]],   // I    {a,d,e},{b,h,j}
    [[1, 6, 7], [2, 9, 11]],   // II   {a,f,g},{b,i,k}
    [[1, 12, 13], [3, 8, 11]], // III  {a,l,m},{c,h,k}
    [[1, 14, 15], [3, 9, 10]], // IV   {a,n,o},{c,i,j}
    [[2, 12, 14], [3, 4, 7]],  // V    {b,l,n},{c,d,g}
    [[2, 13, 15], [3, 5, 6]],  // VI   {b,m,o},{c,e,f}
    [[4, 9, 13], [6, 8, 14]],  // VII  {d,i,m},{f,h,n}
    [[4, 11, 15], [6, 10, 12]],// VIII {d,k,o},{f,j,l}
    [[5, 9, 12], [7, 8, 15]],  // IX   {e,i,l},{g,h,o}
    [[5, 11, 14], [7, 10, 13]],// X    {e,k,n},{g,j,m}
];

pub const SYNTHEME_LABELS: [&str; 10] =
    ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"];

/// The six line pentads 1'..6': spreads of five isotropic lines that
/// partition the 15 points.
pub const LINE_PENTADS: [[[Point; 3]; 5]; 6] = [
    [[1, 2, 3], [4, 8, 12], [5, 10, 15], [6, 11, 13], [7, 9, 14]],
    [[1, 2, 3], [4, 10, 14], [5, 8, 13], [6, 9, 15], [7, 11, 12]],
    [[1, 10, 11], [2, 5, 7], [3, 13, 14], [4, 8, 12], [6, 9, 15]],
    [[1, 8, 9], [2, 4, 6], [3, 13, 14], [5, 10, 15], [7, 11, 12]],
    [[1, 8, 9], [2, 5, 7], [3, 12, 15], [4, 10, 14], [6, 11, 13]],
    [[1, 10, 11], [2, 4, 6], [3, 12, 15], [5, 8, 13], [7, 9, 14]],
];

pub const LINE_PENTAD_LABELS: [&str; 6] = ["1'", "2'", "3'", "4'", "5'", "6'"];

pub const PENTAD_LABELS: [&str; 6] = ["1", "2", "3", "4", "5", "6"];

pub fn point_label(p: Point) -> char {
    debug_assert!((1..=15).contains(&p));
    (b'a' + p - 1) as char
}

pub fn point_from_label(c: char) -> Result<Point> {
    match c {
        'a'..='o' => Ok(c as u8 - b'a' + 1),
        _ => Err(Error::UnknownName(format!("point label {c:?}"))),
    }
}

/// The coordinates (v1,v2,v3,v4) of a point.
pub fn point_vector(p: Point) -> [u32; 4] {
    [
        u32::from(p >> 3) & 1,
        u32::from(p >> 2) & 1,
        u32::from(p >> 1) & 1,
        u32::from(p) & 1,
    ]
}

fn vector_point(v: [u32; 4]) -> Point {
    ((v[0] & 1) << 3 | (v[1] & 1) << 2 | (v[2] & 1) << 1 | (v[3] & 1)) as Point
}

/// The symplectic scalar product `u1 v3 + u2 v4 + u3 v1 + u4 v2` mod 2.
pub fn pairing(p: Point, q: Point) -> u8 {
    let u = point_vector(p);
    let v = point_vector(q);
    ((u[0] * v[2] + u[1] * v[3] + u[2] * v[0] + u[3] * v[1]) % 2) as u8
}

/// The transvection `T_p: v -> v + (v,p) p` as a matrix over Z/2.
pub fn transvection(p: Point) -> ModMatrix4 {
    let col = point_vector(p);
    // (v,p) = (Sp)^T v, so T_p = I + p (Sp)^T.
    let s_rows: [[u32; 4]; 4] = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]];
    let sp: [u32; 4] =
        std::array::from_fn(|i| (0..4).map(|j| s_rows[i][j] * col[j]).sum::<u32>() % 2);
    let mut e = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            e[i][j] = i64::from((u32::from(i == j) + col[i] * sp[j]) % 2);
        }
    }
    ModMatrix4::new(2, e).expect("modulus 2 is valid")
}

/// Image of a point under a matrix over Z/2 (column vector action).
pub fn act_point(m: &ModMatrix4, p: Point) -> Result<Point> {
    if m.modulus() != 2 {
        return Err(Error::InvalidInput("geometry acts modulo 2".into()));
    }
    let image = vector_point(m.apply(point_vector(p)));
    if image == 0 {
        return Err(Error::InvalidInput(
            "matrix is singular mod 2 and does not act on points".into(),
        ));
    }
    Ok(image)
}

fn image_set<const K: usize>(m: &ModMatrix4, points: &[Point; K]) -> Result<[Point; K]> {
    let mut out = [0 as Point; K];
    for (slot, &p) in out.iter_mut().zip(points.iter()) {
        *slot = act_point(m, p)?;
    }
    out.sort_unstable();
    Ok(out)
}

/// The permutation a matrix induces on the six pentads; `perm[i]` is the
/// image of pentad `i` (0-based).
pub fn pentad_permutation(m: &ModMatrix4) -> Result<[usize; 6]> {
    let mut perm = [0usize; 6];
    for (i, pentad) in PENTADS.iter().enumerate() {
        let image = image_set(m, pentad)?;
        perm[i] = PENTADS
            .iter()
            .position(|p| *p == image)
            .ok_or_else(|| Error::InvariantViolation(
                "image of a pentad is not a pentad".into(),
            ))?;
    }
    Ok(perm)
}

fn image_syntheme(m: &ModMatrix4, s: &[[Point; 3]; 2]) -> Result<[[Point; 3]; 2]> {
    let mut lines = [image_set(m, &s[0])?, image_set(m, &s[1])?];
    lines.sort_unstable();
    Ok(lines)
}

/// The permutation a matrix induces on the ten synthemes.
pub fn syntheme_permutation(m: &ModMatrix4) -> Result<[usize; 10]> {
    let mut perm = [0usize; 10];
    for (i, syn) in SYNTHEMES.iter().enumerate() {
        let image = image_syntheme(m, syn)?;
        perm[i] = SYNTHEMES
            .iter()
            .position(|s| *s == image)
            .ok_or_else(|| Error::InvariantViolation(
                "image of a syntheme is not a syntheme".into(),
            ))?;
    }
    Ok(perm)
}

/// The permutation a matrix induces on the six line pentads.
pub fn line_pentad_permutation(m: &ModMatrix4) -> Result<[usize; 6]> {
    let mut perm = [0usize; 6];
    for (i, spread) in LINE_PENTADS.iter().enumerate() {
        let mut image: Vec<[Point; 3]> = spread
            .iter()
            .map(|line| image_set(m, line))
            .collect::<Result<_>>()?;
        image.sort_unstable();
        perm[i] = LINE_PENTADS
            .iter()
            .position(|s| s.as_slice() == image.as_slice())
            .ok_or_else(|| Error::InvariantViolation(
                "image of a line pentad is not a line pentad".into(),
            ))?;
    }
    Ok(perm)
}

/// Image of a pentad under a matrix, as a sorted point set.
pub fn act_pentad(m: &ModMatrix4, pentad: &[Point; 5]) -> Result<[Point; 5]> {
    image_set(m, pentad)
}

/// Image of a syntheme under a matrix, in canonical form.
pub fn act_syntheme(m: &ModMatrix4, syntheme: &[[Point; 3]; 2]) -> Result<[[Point; 3]; 2]> {
    image_syntheme(m, syntheme)
}

/// Image of a line pentad under a matrix, lines sorted.
pub fn act_line_pentad(
    m: &ModMatrix4,
    spread: &[[Point; 3]; 5],
) -> Result<[[Point; 3]; 5]> {
    let mut image: Vec<[Point; 3]> = spread
        .iter()
        .map(|line| image_set(m, line))
        .collect::<Result<_>>()?;
    image.sort_unstable();
    Ok(image.try_into().expect("five lines"))
}

fn common_fixed<const K: usize>(perms: &[[usize; K]]) -> Vec<usize> {
    (0..K)
        .filter(|&i| perms.iter().all(|p| p[i] == i))
        .collect()
}

/// Pentads (0-based indices) fixed setwise by every given matrix.
pub fn fixed_pentads(gens: &[ModMatrix4]) -> Result<Vec<usize>> {
    let perms: Vec<[usize; 6]> = gens.iter().map(pentad_permutation).collect::<Result<_>>()?;
    Ok(common_fixed(&perms))
}

/// Synthemes (0-based indices) fixed setwise by every given matrix.
pub fn fixed_synthemes(gens: &[ModMatrix4]) -> Result<Vec<usize>> {
    let perms: Vec<[usize; 10]> = gens
        .iter()
        .map(syntheme_permutation)
        .collect::<Result<_>>()?;
    Ok(common_fixed(&perms))
}

/// Line pentads (0-based indices) fixed setwise by every given matrix.
pub fn fixed_line_pentads(gens: &[ModMatrix4]) -> Result<Vec<usize>> {
    let perms: Vec<[usize; 6]> = gens
        .iter()
        .map(line_pentad_permutation)
        .collect::<Result<_>>()?;
    Ok(common_fixed(&perms))
}

/// Number of points fixed by a matrix.
pub fn fixed_point_count(m: &ModMatrix4) -> Result<usize> {
    let mut count = 0;
    for p in 1..=POINT_COUNT as Point {
        if act_point(m, p)? == p {
            count += 1;
        }
    }
    Ok(count)
}

/// Cycle notation for a permutation given as an image table, fixed points
/// omitted; `"id"` for the identity.
pub fn cycle_notation(perm: &[usize], labels: &[&str]) -> String {
    assert_eq!(perm.len(), labels.len());
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|&i| labels[i])
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("id");
    }
    out
}

/// All pairwise non-orthogonal five-element point sets, in lexicographic
/// order. There are exactly six: the pentads.
pub fn enumerate_pentads() -> Vec<[Point; 5]> {
    let mut found = Vec::new();
    let mut stack: Vec<Point> = Vec::with_capacity(5);
    fn extend(stack: &mut Vec<Point>, found: &mut Vec<[Point; 5]>) {
        if stack.len() == 5 {
            found.push(stack.clone().try_into().expect("five entries"));
            return;
        }
        let lo = stack.last().map_or(1, |&p| p + 1);
        for q in lo..=POINT_COUNT as Point {
            if stack.iter().all(|&p| pairing(p, q) == 1) {
                stack.push(q);
                extend(stack, found);
                stack.pop();
            }
        }
    }
    extend(&mut stack, &mut found);
    found
}

fn line_through(p: Point, q: Point) -> [Point; 3] {
    // The third point of a projective line over F_2 is the sum, which on
    // our encoding is the XOR.
    let mut line = [p, q, p ^ q];
    line.sort_unstable();
    line
}

/// All pairs (hyperbolic line, perpendicular line), canonically sorted.
/// There are exactly ten: the synthemes.
pub fn enumerate_synthemes() -> Vec<[[Point; 3]; 2]> {
    let mut set: BTreeSet<[[Point; 3]; 2]> = BTreeSet::new();
    for p in 1..=POINT_COUNT as Point {
        for q in p + 1..=POINT_COUNT as Point {
            if pairing(p, q) == 0 {
                continue;
            }
            let line = line_through(p, q);
            let perp: Vec<Point> = (1..=POINT_COUNT as Point)
                .filter(|&r| pairing(r, p) == 0 && pairing(r, q) == 0)
                .collect();
            let perp: [Point; 3] = perp.try_into().expect("perp of a hyperbolic line");
            let mut pair = [line, perp];
            pair.sort_unstable();
            set.insert(pair);
        }
    }
    set.into_iter().collect()
}

/// All partitions of the 15 points into five isotropic lines, in the order
/// a lexicographic backtracking search finds them. There are exactly six:
/// the line pentads (in a different order than the standard labelling).
pub fn enumerate_line_pentads() -> Vec<[[Point; 3]; 5]> {
    let mut lines: Vec<[Point; 3]> = Vec::new();
    for p in 1..=POINT_COUNT as Point {
        for q in p + 1..=POINT_COUNT as Point {
            if pairing(p, q) == 0 && (p ^ q) > q {
                lines.push([p, q, p ^ q]);
            }
        }
    }
    let mut found = Vec::new();
    let mut chosen: Vec<[Point; 3]> = Vec::with_capacity(5);
    fn search(
        lines: &[[Point; 3]],
        covered: &mut u16,
        chosen: &mut Vec<[Point; 3]>,
        found: &mut Vec<[[Point; 3]; 5]>,
    ) {
        if chosen.len() == 5 {
            found.push(chosen.clone().try_into().expect("five lines"));
            return;
        }
        let next = (1..=POINT_COUNT as Point)
            .find(|&p| *covered & (1 << p) == 0)
            .expect("some point uncovered");
        for line in lines {
            if line[0] != next && line[1] != next && line[2] != next {
                continue;
            }
            let mask: u16 = line.iter().map(|&p| 1u16 << p).sum();
            if *covered & mask != 0 {
                continue;
            }
            *covered |= mask;
            chosen.push(*line);
            search(lines, covered, chosen, found);
            chosen.pop();
            *covered &= !mask;
        }
    }
    let mut covered: u16 = 0;
    search(&lines, &mut covered, &mut chosen, &mut found);
    found
}

/// The full group Sp4(F_2), generated by the fifteen transvections
/// (720 elements).
pub fn sp4_f2_elements() -> &'static [ModMatrix4] {
    static ELEMENTS: OnceLock<Vec<ModMatrix4>> = OnceLock::new();
    ELEMENTS.get_or_init(|| {
        let gens: Vec<ModMatrix4> = (1..=POINT_COUNT as Point).map(transvection).collect();
        bfs_elements(&gens, 2).expect("transvection closure mod 2")
    })
}

/// G(d,k) reduced mod 2, as the set of its elements.
pub fn monodromy_mod2_elements(d: u32, k: u32) -> Result<Vec<ModMatrix4>> {
    let (m, n) = integral_generators(d, k);
    let gens = vec![mod_reduce(&m, 2)?, mod_reduce(&n, 2)?];
    bfs_elements(&gens, 2)
}

fn element_keys(elements: &[ModMatrix4]) -> HashSet<[u8; 16]> {
    elements
        .iter()
        .map(|m| m.key().expect("mod-2 key"))
        .collect()
}

/// The elements of Sp4(F_2) fixing pentad `index` (0-based).
pub fn pentad_stabilizer(index: usize) -> Result<Vec<ModMatrix4>> {
    let mut out = Vec::new();
    for m in sp4_f2_elements() {
        if pentad_permutation(m)?[index] == index {
            out.push(m.clone());
        }
    }
    Ok(out)
}

/// The elements of Sp4(F_2) fixing syntheme `index` (0-based).
pub fn syntheme_stabilizer(index: usize) -> Result<Vec<ModMatrix4>> {
    let mut out = Vec::new();
    for m in sp4_f2_elements() {
        if syntheme_permutation(m)?[index] == index {
            out.push(m.clone());
        }
    }
    Ok(out)
}

/// The elements of Sp4(F_2) fixing line pentad `index` (0-based).
pub fn line_pentad_stabilizer(index: usize) -> Result<Vec<ModMatrix4>> {
    let mut out = Vec::new();
    for m in sp4_f2_elements() {
        if line_pentad_permutation(m)?[index] == index {
            out.push(m.clone());
        }
    }
    Ok(out)
}

/// How G(1,3) and G(1,2) sit inside Sp4(F_2) ~ S_6: the first is the full
/// preimage of a pentad stabilizer, the second of a syntheme stabilizer.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem4Report {
    pub sp4_f2_order: usize,
    pub g13_order: usize,
    pub g13_index: usize,
    /// Pentads fixed by both generators of G(1,3) (0-based).
    pub g13_common_fixed_pentads: Vec<usize>,
    pub g13_equals_pentad_stabilizer: bool,
    pub g13_generators_in_stabilizer: bool,
    pub g12_order: usize,
    pub g12_index: usize,
    /// Synthemes fixed by both generators of G(1,2) (0-based).
    pub g12_common_fixed_synthemes: Vec<usize>,
    pub g12_equals_syntheme_stabilizer: bool,
    pub g12_generators_in_stabilizer: bool,
}

pub fn verify_theorem4() -> Result<Theorem4Report> {
    let full = sp4_f2_elements();

    let (m13, n) = integral_generators(1, 3);
    let m13 = mod_reduce(&m13, 2)?;
    let n2 = mod_reduce(&n, 2)?;
    let g13 = bfs_elements(&[m13.clone(), n2.clone()], 2)?;
    let m_perm = pentad_permutation(&m13)?;
    let n_perm = pentad_permutation(&n2)?;
    let g13_common: Vec<usize> = (0..6)
        .filter(|&i| m_perm[i] == i && n_perm[i] == i)
        .collect();
    let pentad_stab = match g13_common.as_slice() {
        [i] => pentad_stabilizer(*i)?,
        _ => Vec::new(),
    };
    let g13_keys = element_keys(&g13);
    let g13_equals = !pentad_stab.is_empty() && g13_keys == element_keys(&pentad_stab);
    let g13_gens_in = {
        let stab_keys = element_keys(&pentad_stab);
        stab_keys.contains(&m13.key().expect("mod-2 key"))
            && stab_keys.contains(&n2.key().expect("mod-2 key"))
    };

    let (m12, _) = integral_generators(1, 2);
    let m12 = mod_reduce(&m12, 2)?;
    let g12 = bfs_elements(&[m12.clone(), n2.clone()], 2)?;
    let ms_perm = syntheme_permutation(&m12)?;
    let ns_perm = syntheme_permutation(&n2)?;
    let g12_common: Vec<usize> = (0..10)
        .filter(|&i| ms_perm[i] == i && ns_perm[i] == i)
        .collect();
    let syntheme_stab = match g12_common.as_slice() {
        [i] => syntheme_stabilizer(*i)?,
        _ => Vec::new(),
    };
    let g12_keys = element_keys(&g12);
    let g12_equals = !syntheme_stab.is_empty() && g12_keys == element_keys(&syntheme_stab);
    let g12_gens_in = {
        let stab_keys = element_keys(&syntheme_stab);
        stab_keys.contains(&m12.key().expect("mod-2 key"))
            && stab_keys.contains(&n2.key().expect("mod-2 key"))
    };

    Ok(Theorem4Report {
        sp4_f2_order: full.len(),
        g13_order: g13.len(),
        g13_index: full.len() / g13.len(),
        g13_common_fixed_pentads: g13_common,
        g13_equals_pentad_stabilizer: g13_equals,
        g13_generators_in_stabilizer: g13_gens_in,
        g12_order: g12.len(),
        g12_index: full.len() / g12.len(),
        g12_common_fixed_synthemes: g12_common,
        g12_equals_syntheme_stabilizer: g12_equals,
        g12_generators_in_stabilizer: g12_gens_in,
    })
}

/// Permutation characters (fixed points on the 15 points, with
/// multiplicities) of a pentad stabilizer and a line pentad stabilizer.
/// Conjugate subgroups would have identical characters, so differing
/// characters prove the two S_5 copies are not conjugate.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerComparison {
    pub pentad_stabilizer_order: usize,
    pub line_pentad_stabilizer_order: usize,
    /// Sorted (fixed-point count, multiplicity) pairs.
    pub pentad_character: Vec<(usize, usize)>,
    pub line_pentad_character: Vec<(usize, usize)>,
    pub conjugate: bool,
}

pub fn compare_pentad_stabilizers() -> Result<StabilizerComparison> {
    let character = |elements: &[ModMatrix4]| -> Result<Vec<(usize, usize)>> {
        let mut counts = std::collections::BTreeMap::new();
        for m in elements {
            *counts.entry(fixed_point_count(m)?).or_insert(0usize) += 1;
        }
        Ok(counts.into_iter().collect())
    };
    let point_stab = pentad_stabilizer(0)?;
    let line_stab = line_pentad_stabilizer(0)?;
    let pentad_character = character(&point_stab)?;
    let line_pentad_character = character(&line_stab)?;
    let conjugate = pentad_character == line_pentad_character;
    Ok(StabilizerComparison {
        pentad_stabilizer_order: point_stab.len(),
        line_pentad_stabilizer_order: line_stab.len(),
        pentad_character,
        line_pentad_character,
        conjugate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_and_vectors() {
        let expected: [(char, [u32; 4]); 15] = [
            ('a', [0, 0, 0, 1]),
            ('b', [0, 0, 1, 0]),
            ('c', [0, 0, 1, 1]),
            ('d', [0, 1, 0, 0]),
            ('e', [0, 1, 0, 1]),
            ('f', [0, 1, 1, 0]),
            ('g', [0, 1, 1, 1]),
            ('h', [1, 0, 0, 0]),
            ('i', [1, 0, 0, 1]),
            ('j', [1, 0, 1, 0]),
            ('k', [1, 0, 1, 1]),
            ('l', [1, 1, 0, 0]),
            ('m', [1, 1, 0, 1]),
            ('n', [1, 1, 1, 0]),
            ('o', [1, 1, 1, 1]),
        ];
        for (p, (label, v)) in (1..=15 as Point).zip(expected) {
            assert_eq!(point_label(p), label);
            assert_eq!(point_vector(p), v);
            assert_eq!(point_from_label(label).unwrap(), p);
        }
        assert!(point_from_label('z').is_err());
    }

    #[test]
    fn pairing_properties() {
        for p in 1..=15 as Point {
            assert_eq!(pairing(p, p), 0);
            let non_orthogonal = (1..=15 as Point).filter(|&q| pairing(p, q) == 1).count();
            assert_eq!(non_orthogonal, 8);
            for q in 1..=15 as Point {
                assert_eq!(pairing(p, q), pairing(q, p));
            }
        }
    }

    #[test]
    fn enumerations_recover_the_standard_lists() {
        assert_eq!(enumerate_pentads(), PENTADS.to_vec());
        assert_eq!(enumerate_synthemes(), SYNTHEMES.to_vec());
        let spreads = enumerate_line_pentads();
        assert_eq!(spreads.len(), 6);
        // The standard labelling 1'..6' is not the search order; compare
        // as sets.
        let found: BTreeSet<[[Point; 3]; 5]> = spreads.into_iter().collect();
        let labelled: BTreeSet<[[Point; 3]; 5]> = LINE_PENTADS.into_iter().collect();
        assert_eq!(found, labelled);
    }

    #[test]
    fn transvections_are_the_fifteen_transpositions() {
        let mut seen = BTreeSet::new();
        for p in 1..=15 as Point {
            let t = transvection(p);
            assert!(t.mul(&t).is_identity(), "transvections are involutions");
            let perm = pentad_permutation(&t).unwrap();
            let moved: Vec<usize> = (0..6).filter(|&i| perm[i] != i).collect();
            assert_eq!(moved.len(), 2, "T_{} acts as a transposition", point_label(p));
            seen.insert(moved.clone());
            // Two transvections share a moved pentad exactly when their
            // points have scalar product one.
            for q in 1..p {
                let other = pentad_permutation(&transvection(q)).unwrap();
                let other_moved: Vec<usize> = (0..6).filter(|&i| other[i] != i).collect();
                let share = moved.iter().any(|i| other_moved.contains(i));
                assert_eq!(share, pairing(p, q) == 1);
            }
        }
        assert_eq!(seen.len(), 15, "all fifteen transpositions occur");
    }

    #[test]
    fn transvection_at_a_is_the_expected_matrix_and_transposition() {
        let t = transvection(1);
        let mut expected = [[0i64; 4]; 4];
        for (i, row) in expected.iter_mut().enumerate() {
            row[i] = 1;
        }
        expected[3][1] = 1; // I + E42
        assert_eq!(t, ModMatrix4::new(2, expected).unwrap());
        assert_eq!(pentad_permutation(&t).unwrap(), [1, 0, 2, 3, 4, 5]);
    }

    #[test]
    fn pentad_action_realises_s6() {
        let elements = sp4_f2_elements();
        assert_eq!(elements.len(), 720);
        let perms: HashSet<[usize; 6]> = elements
            .iter()
            .map(|m| pentad_permutation(m).unwrap())
            .collect();
        assert_eq!(perms.len(), 720, "the action is faithful, so the image is all of S6");
    }

    #[test]
    fn g13_pentad_action() {
        let (m, n) = integral_generators(1, 3);
        let m = mod_reduce(&m, 2).unwrap();
        let n = mod_reduce(&n, 2).unwrap();
        // Point images on pentad 1.
        let images: Vec<Point> = [1, 4, 7, 13, 15]
            .iter()
            .map(|&p| act_point(&m, p).unwrap())
            .collect();
        assert_eq!(
            images,
            vec![1, 15, 13, 4, 7],
            "a->a, d->o, g->m, m->d, o->g"
        );
        let m_perm = pentad_permutation(&m).unwrap();
        let n_perm = pentad_permutation(&n).unwrap();
        assert_eq!(m_perm, [0, 1, 5, 4, 2, 3]);
        assert_eq!(n_perm, [4, 1, 2, 3, 0, 5]);
        assert_eq!(cycle_notation(&m_perm, &PENTAD_LABELS), "(3 6 4 5)");
        assert_eq!(cycle_notation(&n_perm, &PENTAD_LABELS), "(1 5)");
    }

    #[test]
    fn g12_syntheme_action() {
        let (m, n) = integral_generators(1, 2);
        let m = mod_reduce(&m, 2).unwrap();
        let n = mod_reduce(&n, 2).unwrap();
        let m_perm = syntheme_permutation(&m).unwrap();
        let n_perm = syntheme_permutation(&n).unwrap();
        assert_eq!(
            cycle_notation(&m_perm, &SYNTHEME_LABELS),
            "(I IV II III)(VII X IX VIII)"
        );
        assert_eq!(
            cycle_notation(&n_perm, &SYNTHEME_LABELS),
            "(II VI)(III IX)(IV X)"
        );
        let common: Vec<usize> = (0..10)
            .filter(|&i| m_perm[i] == i && n_perm[i] == i)
            .collect();
        assert_eq!(common, vec![4], "only syntheme V survives both");
    }

    #[test]
    fn theorem4_report() {
        let report = verify_theorem4().unwrap();
        assert_eq!(report.sp4_f2_order, 720);
        assert_eq!(report.g13_order, 120);
        assert_eq!(report.g13_index, 6);
        assert_eq!(report.g13_common_fixed_pentads, vec![1]);
        assert!(report.g13_equals_pentad_stabilizer);
        assert!(report.g13_generators_in_stabilizer);
        assert_eq!(report.g12_order, 72);
        assert_eq!(report.g12_index, 10);
        assert_eq!(report.g12_common_fixed_synthemes, vec![4]);
        assert!(report.g12_equals_syntheme_stabilizer);
        assert!(report.g12_generators_in_stabilizer);
    }

    #[test]
    fn the_two_s5_copies_are_not_conjugate() {
        let cmp = compare_pentad_stabilizers().unwrap();
        assert_eq!(cmp.pentad_stabilizer_order, 120);
        assert_eq!(cmp.line_pentad_stabilizer_order, 120);
        assert!(!cmp.conjugate);
        assert_ne!(cmp.pentad_character, cmp.line_pentad_character);
    }

    #[test]
    fn act_and_fixed_objects() {
        let (m, n) = integral_generators(1, 3);
        let m = mod_reduce(&m, 2).unwrap();
        let n = mod_reduce(&n, 2).unwrap();
        assert_eq!(act_pentad(&m, &PENTADS[0]).unwrap(), PENTADS[0]);
        assert_eq!(act_pentad(&n, &PENTADS[0]).unwrap(), PENTADS[4]);
        let id = ModMatrix4::identity(2).unwrap();
        for pentad in &PENTADS {
            assert_eq!(act_pentad(&id, pentad).unwrap(), *pentad);
        }
        assert_eq!(act_syntheme(&id, &SYNTHEMES[4]).unwrap(), SYNTHEMES[4]);
        assert_eq!(
            act_line_pentad(&id, &LINE_PENTADS[0]).unwrap(),
            LINE_PENTADS[0]
        );
        assert_eq!(
            fixed_pentads(&[m.clone(), n.clone()]).unwrap(),
            vec![1],
            "only pentad 2 is fixed by both generators of G(1,3)"
        );
        let (m12, _) = integral_generators(1, 2);
        let m12 = mod_reduce(&m12, 2).unwrap();
        assert_eq!(fixed_synthemes(&[m12, n]).unwrap(), vec![4]);
        assert_eq!(fixed_pentads(&[id]).unwrap(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn pentad_action_is_a_homomorphism_on_sampled_pairs() {
        let elements = sp4_f2_elements();
        // Deterministic sample of pairs.
        for step in 1..=20usize {
            for i in (0..elements.len()).step_by(67 + step) {
                let j = (i * step + 13) % elements.len();
                let g = &elements[i];
                let h = &elements[j];
                let gh = g.mul(h);
                let pg = pentad_permutation(g).unwrap();
                let ph = pentad_permutation(h).unwrap();
                let pgh = pentad_permutation(&gh).unwrap();
                // Column-vector convention: (g h) acts by h first.
                let composed: [usize; 6] = std::array::from_fn(|x| pg[ph[x]]);
                assert_eq!(pgh, composed);
            }
        }
    }

    #[test]
    #[ignore = "exhaustive 720x720 homomorphism check, run on demand"]
    fn pentad_action_is_a_homomorphism_exhaustively() {
        let elements = sp4_f2_elements();
        let perms: Vec<[usize; 6]> = elements
            .iter()
            .map(|m| pentad_permutation(m).unwrap())
            .collect();
        let index_of: std::collections::HashMap<[u8; 16], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.key().unwrap(), i))
            .collect();
        for (i, g) in elements.iter().enumerate() {
            for (j, h) in elements.iter().enumerate() {
                let k = index_of[&g.mul(h).key().unwrap()];
                let composed: [usize; 6] = std::array::from_fn(|x| perms[i][perms[j][x]]);
                assert_eq!(perms[k], composed);
            }
        }
    }

    #[test]
    fn singular_matrices_do_not_act() {
        let zero = ModMatrix4::new(2, [[0; 4]; 4]).unwrap();
        assert!(act_point(&zero, 1).is_err());
        let mod3 = ModMatrix4::identity(3).unwrap();
        assert!(act_point(&mod3, 1).is_err());
    }
}
