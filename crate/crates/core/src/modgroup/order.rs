//! Order computation for matrix groups over Z/N, behind a common trait.
//!
//! BFS closure simply enumerates all elements and is the method of choice
//! when the ambient group is small. The Schreier-Sims method builds a
//! stabilizer chain for the natural action on (Z/N)^4 with the standard
//! basis as base; the base is faithful for linear actions, so the chain
//! order is exact.

use std::collections::{HashMap, HashSet};

use num::BigUint;

use crate::error::{Error, Result};
use crate::modmat::ModMatrix4;

/// A way of computing the order of a subgroup of GL4(Z/N) from generators.
pub trait OrderMethod: Sync {
    fn name(&self) -> &'static str;

    /// The order of the group generated by `gens` over `Z/modulus`.
    fn order(&self, gens: &[ModMatrix4], modulus: u32) -> Result<BigUint>;
}

/// The registered order methods.
pub fn order_methods() -> [&'static dyn OrderMethod; 2] {
    [&Bfs, &SchreierSims]
}

pub fn order_method_by_name(name: &str) -> Result<&'static dyn OrderMethod> {
    order_methods()
        .into_iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| {
            Error::UnknownName(format!(
                "order method {name:?} (expected \"bfs\" or \"schreier_sims\")"
            ))
        })
}

/// BFS when the full symplectic group over Z/N is small (N <= 4), the
/// stabilizer chain otherwise.
pub fn auto_order_method(modulus: u32) -> &'static dyn OrderMethod {
    match super::sp4_order(modulus) {
        Ok(order) if order <= BigUint::from(1u32 << 20) => &Bfs,
        _ => &SchreierSims,
    }
}

fn check_gens(gens: &[ModMatrix4], modulus: u32) -> Result<()> {
    if modulus < 1 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if gens.iter().any(|g| g.modulus() != modulus) {
        return Err(Error::InvalidInput(
            "generator modulus does not match the requested modulus".into(),
        ));
    }
    Ok(())
}

/// Upper bound on how many elements [`bfs_elements`] will enumerate.
pub const BFS_CAP: usize = 1 << 22;

/// All elements of the group generated by `gens`, by breadth-first closure
/// under right multiplication. Requires `modulus <= 256` (elements are
/// deduplicated through a packed 16-byte key).
pub fn bfs_elements(gens: &[ModMatrix4], modulus: u32) -> Result<Vec<ModMatrix4>> {
    check_gens(gens, modulus)?;
    let key_of = |m: &ModMatrix4| -> Result<[u8; 16]> {
        m.key().ok_or_else(|| {
            Error::Infeasible(format!(
                "bfs needs modulus <= 256 to pack elements, got {modulus}"
            ))
        })
    };
    let identity = ModMatrix4::identity(modulus)?;
    let mut seen: HashSet<[u8; 16]> = HashSet::new();
    seen.insert(key_of(&identity)?);
    let mut elements = vec![identity];
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in gens {
            let next = current.mul(g);
            if seen.insert(key_of(&next)?) {
                if elements.len() >= BFS_CAP {
                    return Err(Error::Infeasible(format!(
                        "group order exceeds the bfs cap of {BFS_CAP}; \
                         use the schreier_sims method"
                    )));
                }
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// Order by exhaustive closure.
pub struct Bfs;

impl OrderMethod for Bfs {
    fn name(&self) -> &'static str {
        "bfs"
    }

    fn order(&self, gens: &[ModMatrix4], modulus: u32) -> Result<BigUint> {
        Ok(BigUint::from(bfs_elements(gens, modulus)?.len()))
    }
}

/// Order via a stabilizer chain for the action on (Z/N)^4.
pub struct SchreierSims;

impl OrderMethod for SchreierSims {
    fn name(&self) -> &'static str {
        "schreier_sims"
    }

    fn order(&self, gens: &[ModMatrix4], modulus: u32) -> Result<BigUint> {
        check_gens(gens, modulus)?;
        if modulus > 1 << 12 {
            return Err(Error::Infeasible(format!(
                "schreier_sims packs points of (Z/N)^4 into u64 and needs \
                 N <= 4096, got {modulus}"
            )));
        }
        let chain = StabilizerChain::build(gens, modulus)?;
        Ok(chain.order())
    }
}

fn encode(v: [u32; 4], n: u64) -> u64 {
    u64::from(v[0]) + n * (u64::from(v[1]) + n * (u64::from(v[2]) + n * u64::from(v[3])))
}

fn decode(mut p: u64, n: u64) -> [u32; 4] {
    let mut v = [0u32; 4];
    for slot in &mut v {
        *slot = (p % n) as u32;
        p /= n;
    }
    v
}

/// One level of the chain: the stabilizer of the first `i` base points,
/// given by its generators, with the orbit of base point `i` and a
/// transversal. Transversal entries `(u, u^-1)` satisfy `u(base) = point`
/// and, once inserted, are never rewritten, so verified Schreier generators
/// stay verified.
struct Level {
    base: [u32; 4],
    gens: Vec<(ModMatrix4, ModMatrix4)>,
    orbit: Vec<u64>,
    transversal: HashMap<u64, (ModMatrix4, ModMatrix4)>,
}

struct StabilizerChain {
    n: u64,
    levels: Vec<Level>,
}

impl StabilizerChain {
    fn build(gens: &[ModMatrix4], modulus: u32) -> Result<Self> {
        let identity = ModMatrix4::identity(modulus)?;
        let levels = (0..4)
            .map(|i| {
                let mut base = [0u32; 4];
                base[i] = 1;
                let point = encode(base, u64::from(modulus));
                let mut transversal = HashMap::new();
                transversal.insert(point, (identity.clone(), identity.clone()));
                Level {
                    base,
                    gens: Vec::new(),
                    orbit: vec![point],
                    transversal,
                }
            })
            .collect();
        let mut chain = StabilizerChain {
            n: u64::from(modulus),
            levels,
        };
        for g in gens {
            if !g.is_identity() {
                chain.add_generator(0, g.clone())?;
            }
        }
        // Down-up verification: check a level's Schreier generators; a
        // failure deposits a residue at a deeper level, which is then
        // verified first. On success move one level up; levels above are
        // unaffected because transversals only ever grow.
        let mut i: i32 = 0;
        while i >= 0 {
            match chain.verify(i as usize)? {
                Some(j) => i = j as i32,
                None => i -= 1,
            }
        }
        Ok(chain)
    }

    fn order(&self) -> BigUint {
        self.levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product()
    }

    /// Adds a generator at `level` and extends the orbit incrementally:
    /// existing transversal entries are kept as they are.
    fn add_generator(&mut self, level: usize, g: ModMatrix4) -> Result<()> {
        let g_inv = g.inverse()?;
        self.levels[level].gens.push((g, g_inv));
        let n = self.n;
        let mut head = 0;
        while head < self.levels[level].orbit.len() {
            let point = self.levels[level].orbit[head];
            head += 1;
            let (u, u_inv) = self.levels[level].transversal[&point].clone();
            for gi in 0..self.levels[level].gens.len() {
                let (g, g_inv) = self.levels[level].gens[gi].clone();
                let image = encode(g.apply(decode(point, n)), n);
                let lvl = &mut self.levels[level];
                if !lvl.transversal.contains_key(&image) {
                    lvl.transversal
                        .insert(image, (g.mul(&u), u_inv.mul(&g_inv)));
                    lvl.orbit.push(image);
                }
            }
        }
        Ok(())
    }

    /// Left-divides `m` by transversal elements from `level` downwards.
    /// Returns the residue and the level at which sifting stopped (4 means
    /// the residue fixes every base point, hence is the identity).
    fn strip(&self, mut m: ModMatrix4, level: usize) -> (ModMatrix4, usize) {
        for (i, lvl) in self.levels.iter().enumerate().skip(level) {
            let point = encode(m.apply(lvl.base), self.n);
            match lvl.transversal.get(&point) {
                None => return (m, i),
                Some((_, u_inv)) => m = u_inv.mul(&m),
            }
        }
        (m, 4)
    }

    /// Checks every Schreier generator of `level`; on the first one that
    /// does not sift to the identity, deposits the residue at the level
    /// where sifting stopped and reports that level.
    fn verify(&mut self, level: usize) -> Result<Option<usize>> {
        let mut idx = 0;
        while idx < self.levels[level].orbit.len() {
            let point = self.levels[level].orbit[idx];
            idx += 1;
            let (u, _) = self.levels[level].transversal[&point].clone();
            for gi in 0..self.levels[level].gens.len() {
                let (g, _) = self.levels[level].gens[gi].clone();
                let image = encode(g.apply(decode(point, self.n)), self.n);
                let (_, ui_inv) = self.levels[level]
                    .transversal
                    .get(&image)
                    .expect("orbit is closed under its generators")
                    .clone();
                let schreier = ui_inv.mul(&g).mul(&u);
                if schreier.is_identity() {
                    continue;
                }
                let (residue, stopped) = self.strip(schreier, level + 1);
                if stopped == 4 {
                    if !residue.is_identity() {
                        return Err(Error::InvariantViolation(
                            "sifted residue fixes the whole basis but is not the identity"
                                .into(),
                        ));
                    }
                    continue;
                }
                // The residue fixes the base points of every level up to
                // `stopped`, and it has to join each of those levels for
                // the groups along the chain to stay nested.
                for h in level + 1..=stopped {
                    self.add_generator(h, residue.clone())?;
                }
                return Ok(Some(stopped));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::integral_generators;
    use crate::modmat::mod_reduce;

    fn monodromy_gens(d: u32, k: u32, n: u32) -> Vec<ModMatrix4> {
        let (m, nn) = integral_generators(d, k);
        vec![mod_reduce(&m, n).unwrap(), mod_reduce(&nn, n).unwrap()]
    }

    #[test]
    fn both_methods_agree_on_small_groups() {
        for (d, k, n) in [(1, 3, 2), (1, 2, 2), (2, 3, 4), (16, 8, 3)] {
            let gens = monodromy_gens(d, k, n);
            let bfs = Bfs.order(&gens, n).unwrap();
            let sims = SchreierSims.order(&gens, n).unwrap();
            assert_eq!(bfs, sims, "({d},{k}) mod {n}");
        }
    }

    #[test]
    fn full_group_orders() {
        use crate::words::behr_matrices;
        for n in [2u32, 3, 4, 5] {
            let gens: Vec<ModMatrix4> = behr_matrices()
                .iter()
                .map(|m| mod_reduce(m, n).unwrap())
                .collect();
            let order = SchreierSims.order(&gens, n).unwrap();
            assert_eq!(order, super::super::sp4_order(n).unwrap(), "mod {n}");
        }
    }

    #[test]
    fn trivial_group() {
        let gens = vec![ModMatrix4::identity(7).unwrap()];
        assert_eq!(Bfs.order(&gens, 7).unwrap(), BigUint::from(1u32));
        assert_eq!(SchreierSims.order(&gens, 7).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn method_registry() {
        assert_eq!(order_method_by_name("bfs").unwrap().name(), "bfs");
        assert_eq!(
            order_method_by_name("schreier_sims").unwrap().name(),
            "schreier_sims"
        );
        assert!(order_method_by_name("orbits").is_err());
        assert_eq!(auto_order_method(4).name(), "bfs");
        assert_eq!(auto_order_method(5).name(), "schreier_sims");
    }
}
