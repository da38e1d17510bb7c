//! Reductions modulo N: orders and indices of the monodromy groups inside
//! Sp4(Z/N).
//!
//! The reduction Sp4(Z) -> Sp4(Z/N) is surjective, so the index of the
//! image of a monodromy group inside Sp4(Z/N) is a lower bound for its
//! index in Sp4(Z); indices at pairwise coprime moduli multiply into a
//! combined lower bound.

pub mod order;

use num::{BigUint, Integer, One, Zero};

pub use order::{
    auto_order_method, bfs_elements, order_method_by_name, order_methods, Bfs, OrderMethod,
    SchreierSims,
};

use crate::catalog::integral_generators;
use crate::error::{Error, Result};
use crate::matrix::{is_symplectic, standard_form, ExactMatrix4};
use crate::modmat::{mod_reduce, ModMatrix4};

/// The order of Sp4(Z/N): N^10 times (1 - p^-2)(1 - p^-4) over the primes
/// dividing N.
pub fn sp4_order(n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let mut order = BigUint::from(n).pow(10);
    for p in crate::catalog::prime_divisors(n) {
        let p = BigUint::from(p);
        let p2 = &p * &p;
        let p4 = &p2 * &p2;
        // Divide first: n^10 carries at least p^10, so this stays exact.
        order /= &p2 * &p4;
        order *= (&p2 - 1u32) * (&p4 - 1u32);
    }
    Ok(order)
}

/// The images of `gens` in Sp4(Z/N). Every generator must be integral and
/// symplectic before reduction.
pub fn symplectic_mod_generators(gens: &[ExactMatrix4], n: u32) -> Result<Vec<ModMatrix4>> {
    let form = standard_form();
    gens.iter()
        .map(|g| {
            if !is_symplectic(g, &form) {
                return Err(Error::InvalidInput(
                    "generator is not symplectic for the standard form".into(),
                ));
            }
            mod_reduce(g, n)
        })
        .collect()
}

/// The order and index of the image of a subgroup of Sp4(Z) in Sp4(Z/N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModIndexReport {
    pub modulus: u32,
    /// |Sp4(Z/N)|.
    pub group_order: BigUint,
    /// Order of the image of the subgroup.
    pub subgroup_order: BigUint,
    /// Index of the image in Sp4(Z/N).
    pub index: BigUint,
    /// Name of the order method that was used.
    pub method: &'static str,
}

/// Reduces `gens` modulo `n` and computes the index of the subgroup they
/// generate inside Sp4(Z/N). With `method` of `None` a method is picked by
/// the size of the ambient group.
pub fn mod_index(
    gens: &[ExactMatrix4],
    n: u32,
    method: Option<&dyn OrderMethod>,
) -> Result<ModIndexReport> {
    let reduced = symplectic_mod_generators(gens, n)?;
    let method = method.unwrap_or_else(|| auto_order_method(n));
    let subgroup_order = method.order(&reduced, n)?;
    let group_order = sp4_order(n)?;
    let (index, rem) = group_order.div_rem(&subgroup_order);
    if !rem.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "computed order {subgroup_order} does not divide |Sp4(Z/{n})| = {group_order}"
        )));
    }
    Ok(ModIndexReport {
        modulus: n,
        group_order,
        subgroup_order,
        index,
        method: method.name(),
    })
}

/// [`mod_index`] for G(d,k) together with optional extra generators.
pub fn monodromy_mod_index(
    d: u32,
    k: u32,
    extras: &[ExactMatrix4],
    n: u32,
    method: Option<&dyn OrderMethod>,
) -> Result<ModIndexReport> {
    let (m, nn) = integral_generators(d, k);
    let mut gens = vec![m, nn];
    gens.extend_from_slice(extras);
    mod_index(&gens, n, method)
}

/// Multiplies indices at pairwise coprime moduli into a combined lower
/// bound for the index in Sp4(Z).
pub fn crt_lower_bound(cells: &[(u32, BigUint)]) -> Result<BigUint> {
    for (i, (m, _)) in cells.iter().enumerate() {
        if *m == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        for (other, _) in &cells[i + 1..] {
            if m.gcd(other) != 1 {
                return Err(Error::InvalidInput(format!(
                    "moduli {m} and {other} are not coprime"
                )));
            }
        }
    }
    Ok(cells.iter().map(|(_, idx)| idx).product())
}

/// `true` if the combined bound is exactly one: the group surjects onto
/// Sp4(Z/N) for every checked modulus.
pub fn bound_is_trivial(bound: &BigUint) -> bool {
    bound.is_one()
}
