//! Property tests for the structural invariants: random inputs instead of
//! the published values, which live in `acceptance.rs`.

use proptest::prelude::*;

use num::{BigUint, Integer, One, Zero};
use sp4mono::catalog::{gamma_index, gamma_membership, integral_generators};
use sp4mono::matrix::{
    is_symplectic, is_symplectic_reflection, rat, standard_form, symplectic_reflection,
    QuadraticVector4, ReflectionSign,
};
use sp4mono::modgroup::sp4_order;
use sp4mono::modmat::mod_reduce;
use sp4mono::words::{Gen, Word};

/// A random freely reduced word of at most 20 letters.
fn word_strategy() -> impl Strategy<Value = Word> {
    proptest::collection::vec((0usize..6, -3i64..=3), 0..8).prop_map(|syllables| {
        let mut w = Word::identity();
        let mut len = 0;
        for (g, e) in syllables {
            if len + e.unsigned_abs() > 20 {
                break;
            }
            len += e.unsigned_abs();
            w.push(Gen::ALL[g], e);
        }
        w
    })
}

proptest! {
    /// Behr generator products stay in Sp4(Z) and reduce compatibly:
    /// reduction mod N is a homomorphism from word evaluation.
    #[test]
    fn word_evaluation_is_symplectic_and_reduces(w in word_strategy(), n in 2u32..=13) {
        let m = w.evaluate();
        prop_assert!(is_symplectic(&m, &standard_form()));
        let reduced = mod_reduce(&m, n).unwrap();
        let mut acc = sp4mono::modmat::ModMatrix4::identity(n).unwrap();
        for &(g, e) in w.syllables() {
            let g = mod_reduce(&g.matrix(), n).unwrap();
            let step = if e < 0 { g.inverse().unwrap() } else { g };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&step);
            }
        }
        prop_assert_eq!(reduced, acc);
    }

    /// The inverse word evaluates to the inverse matrix, and concatenation
    /// to the product.
    #[test]
    fn word_algebra_matches_matrix_algebra(a in word_strategy(), b in word_strategy()) {
        prop_assert_eq!(a.inverse().evaluate(), a.evaluate().inverse().unwrap());
        prop_assert_eq!(a.concat(&b).evaluate(), a.evaluate().mul(&b.evaluate()));
    }

    /// Words survive the display form and the wire form unchanged.
    #[test]
    fn word_roundtrips_through_text_and_json(w in word_strategy()) {
        let display: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(&display, &w);
        let wire: Word = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        prop_assert_eq!(&wire, &w);
    }

    /// Every integral reflection vector yields a symplectic transvection:
    /// form preserved, (T - I)^2 = 0, rank(T - I) = 1.
    #[test]
    fn reflections_are_symplectic_transvections(v in prop::array::uniform4(-6i64..=6), sign in prop::bool::ANY) {
        prop_assume!(v.iter().any(|&c| c != 0));
        let sign = if sign { ReflectionSign::Plus } else { ReflectionSign::Minus };
        let t = symplectic_reflection(
            &QuadraticVector4::from_i64(v),
            &rat(1),
            &standard_form(),
            sign,
        ).unwrap();
        prop_assert!(is_symplectic_reflection(&t, &standard_form()));
        // (T - I)^2 = 0 gives the explicit inverse T^-1 = 2I - T.
        let double_identity = sp4mono::matrix::ExactMatrix4::identity().scale(&rat(2));
        prop_assert_eq!(t.inverse().unwrap(), double_identity.sub(&t));
    }

    /// Monodromy generators lie in Gamma(d, gcd(d,k)), and membership is
    /// closed under short products.
    #[test]
    fn monodromy_products_stay_in_gamma(
        d in 1u32..=9,
        k in 1u32..=8,
        picks in proptest::collection::vec(prop::bool::ANY, 1..6),
    ) {
        let (m, n) = integral_generators(d, k);
        let d2 = d.gcd(&k);
        let mut product = sp4mono::matrix::ExactMatrix4::identity();
        for pick in picks {
            product = product.mul(if pick { &m } else { &n });
        }
        prop_assert!(gamma_membership(&product, d, d2).unwrap());
    }

    /// The congruence-subgroup index formula is multiplicative over coprime
    /// level pairs.
    #[test]
    fn gamma_index_is_multiplicative(d1 in 1u32..=12, e1 in 1u32..=12) {
        prop_assume!(d1.gcd(&e1) == 1);
        let product = gamma_index(d1 * e1, 1).unwrap();
        prop_assert_eq!(product, gamma_index(d1, 1).unwrap() * gamma_index(e1, 1).unwrap());
        let with_d2 = gamma_index(d1 * e1, d1 * e1).unwrap();
        prop_assert_eq!(
            with_d2,
            gamma_index(d1, d1).unwrap() * gamma_index(e1, e1).unwrap()
        );
    }

    /// |Sp4(Z/mn)| = |Sp4(Z/m)| |Sp4(Z/n)| for coprime m, n, and the order
    /// is divisible by the order at every divisor level.
    #[test]
    fn sp4_order_is_multiplicative(m in 2u32..=30, n in 2u32..=30) {
        if m.gcd(&n) == 1 {
            prop_assert_eq!(
                sp4_order(m * n).unwrap(),
                sp4_order(m).unwrap() * sp4_order(n).unwrap()
            );
        }
        let (quotient, rem) = sp4_order(m * n).unwrap().div_rem(&sp4_order(m).unwrap());
        prop_assert!(rem.is_zero());
        prop_assert!(quotient >= BigUint::one());
    }

    /// Reduction maps of a symplectic integral matrix commute with the
    /// natural projection Z/mn -> Z/m.
    #[test]
    fn mod_reduction_commutes_with_projection(w in word_strategy(), m in 2u32..=9, q in 2u32..=9) {
        let matrix = w.evaluate();
        let fine = mod_reduce(&matrix, m * q).unwrap();
        let coarse = mod_reduce(&matrix, m).unwrap();
        let projected = sp4mono::modmat::ModMatrix4::new(
            m,
            std::array::from_fn(|i| std::array::from_fn(|j| i64::from(fine.entry(i, j)))),
        ).unwrap();
        prop_assert_eq!(projected, coarse);
    }
}
