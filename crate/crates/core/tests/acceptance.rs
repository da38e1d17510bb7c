//! Acceptance gate: the published results the toolkit must reproduce.
//!
//! One test per criterion; each ends by printing a PASS line (visible with
//! `--nocapture`), so a harness failure pinpoints the broken criterion.
//! The long tiers are `#[ignore]`d and run with `cargo test -- --ignored`:
//! they exceed minutes-scale budgets, and one of them fails by design —
//! `acceptance_04_long_companion_5_4` attempts the published companion index
//! 3,900,000 for G(5,4), which the mod-N evidence refutes (see the panic
//! message for the full analysis).

use std::collections::BTreeSet;
use std::time::Instant;

use num::{BigUint, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use sp4mono::catalog::{builtin_catalog, gamma_index, lambda_of, theorem_status, IndexStatus};
use sp4mono::coset::{
    enumerate_monodromy, strategy_by_name, Outcome, DEFAULT_BUDGET, MAX_BUDGET,
};
use sp4mono::geometry;
use sp4mono::matrix::{rat, ExactMatrix4};
use sp4mono::modgroup::{
    crt_lower_bound, monodromy_mod_index, order::BFS_CAP, order_method_by_name, bfs_elements,
    symplectic_mod_generators,
};
use sp4mono::words::{decompose, monodromy_words, Gen, Word};

/// Runs one enumeration to completion, panicking with run data otherwise.
fn tc_index(d: u32, k: u32, extras: &[ExactMatrix4], strategy: &str, budget: usize) -> u64 {
    let strategy = strategy_by_name(strategy).unwrap();
    let result = enumerate_monodromy(d, k, extras, strategy, budget).unwrap();
    match result.outcome {
        Outcome::Completed { index } => index,
        Outcome::BudgetExceeded { live, defined } => panic!(
            "({d},{k}) with {} extras: budget {budget} exceeded ({live} live, {defined} defined)",
            extras.len()
        ),
    }
}

#[test]
fn acceptance_01_fast_tier_indices() {
    for (d, k, expected) in [(1, 3, 6), (1, 2, 10), (2, 3, 960)] {
        let start = Instant::now();
        let index = tc_index(d, k, &[], "hlt", DEFAULT_BUDGET);
        let elapsed = start.elapsed();
        assert_eq!(index, expected, "({d},{k})");
        assert!(elapsed.as_secs() < 10, "({d},{k}) took {elapsed:?}");
    }
    println!("ACCEPTANCE 1 (fast tier: (1,3)=6, (1,2)=10, (2,3)=960, each < 10 s): PASS");
}

#[test]
fn acceptance_02_medium_tier_3_4() {
    let start = Instant::now();
    let hlt = tc_index(3, 4, &[], "hlt", 25_000_000);
    let felsch = tc_index(3, 4, &[], "felsch", 6_000_000);
    let elapsed = start.elapsed();
    assert_eq!(hlt, 3_110_400);
    assert_eq!(felsch, 3_110_400);
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!("ACCEPTANCE 2 (medium tier: (3,4) = 3,110,400, hlt and felsch agree, < 10 min): PASS");
}

/// Heavy tier, not part of the default suite. Memory budget: the felsch run
/// defines 56M cosets; at 12 u32 slots per row the table is 2.7 GB, plus a
/// 0.3 GB union-find array — stay under a 4 GB ceiling. Takes ~6 minutes.
#[test]
#[ignore = "heavy tier: ~6 minutes and ~3 GB; run with --ignored"]
fn acceptance_03_heavy_tier_4_4() {
    let index = tc_index(4, 4, &[], "felsch", 66_000_000);
    assert_eq!(index, 47_185_920);
    println!("ACCEPTANCE 3 (heavy tier: (4,4) = 47,185,920 behind --long): PASS");
}

#[test]
fn acceptance_04_conifold_default_tier() {
    let catalog = builtin_catalog();
    // Conifold cases with their extra generator adjoined.
    for (aesz, expected) in [(337, 1), (292, 6), (289, 360), (241, 3840), (257, 122_880)] {
        let record = catalog.by_aesz(aesz).unwrap();
        let start = Instant::now();
        let index = tc_index(record.d, record.k, &record.extra_generators, "hlt", DEFAULT_BUDGET);
        assert_eq!(index, expected, "AESZ {aesz}");
        if aesz == 337 {
            assert!(start.elapsed().as_secs() < 10, "AESZ 337 took {:?}", start.elapsed());
        }
    }
    // Bare companions G(d,k).
    for (d, k, expected) in [(2, 2, 5760), (3, 3, 933_120), (4, 3, 122_880)] {
        assert_eq!(tc_index(d, k, &[], "hlt", DEFAULT_BUDGET), expected, "({d},{k})");
    }
    println!(
        "ACCEPTANCE 4 (conifold tier: 337=1, 292=6, 289=360, 241=3840, 257=122880; \
         companions (2,2)=5760, (3,3)=933120, (4,3)=122880): PASS"
    );
}

#[test]
#[ignore = "long tier: ~3 s but grouped with the opt-in cases; run with --ignored"]
fn acceptance_04_long_aesz33() {
    let record = builtin_catalog().by_aesz(33).unwrap();
    let index = tc_index(record.d, record.k, &record.extra_generators, "hlt", DEFAULT_BUDGET);
    assert_eq!(index, 1_036_800);
    println!("ACCEPTANCE 4 (long tier: AESZ 33 = 1,036,800): PASS");
}

/// The published companion index for G(5,4) is 3,900,000. The enumeration is
/// attempted faithfully at the memory ceiling and the claim is checked
/// against the congruence images; the test FAILS because the value is
/// refuted, and the panic message carries the evidence.
#[test]
#[ignore = "long tier, fails by design: the published value 3,900,000 is refuted; run with --ignored"]
fn acceptance_04_long_companion_5_4() {
    // Independent evidence first: image indices at the prime powers 16 and
    // 25 multiply into a lower bound for the index in Sp4(Z).
    let sims = order_method_by_name("schreier_sims").unwrap();
    let mod16 = monodromy_mod_index(5, 4, &[], 16, Some(sims)).unwrap().index;
    let mod25 = monodromy_mod_index(5, 4, &[], 25, Some(sims)).unwrap().index;
    let mod2 = monodromy_mod_index(5, 4, &[], 2, Some(sims)).unwrap().index;
    let bound = crt_lower_bound(&[(16, mod16.clone()), (25, mod25.clone())]).unwrap();

    let outcome = enumerate_monodromy(5, 4, &[], strategy_by_name("felsch").unwrap(), MAX_BUDGET)
        .unwrap()
        .outcome;
    match outcome {
        Outcome::Completed { index } => {
            // Should the enumeration ever close, hold it to the published value.
            assert_eq!(
                index, 3_900_000,
                "enumeration closed at {index}, not the published 3,900,000; \
                 mod-16 index {mod16}, mod-25 index {mod25}, combined bound {bound}"
            );
        }
        Outcome::BudgetExceeded { live, defined } => panic!(
            "published companion index 3,900,000 for G(5,4) is REFUTED: \
             the image index in Sp4(Z/16) is {mod16} and in Sp4(Z/25) is {mod25}, \
             so the index in Sp4(Z) is at least {mod16} x {mod25} = {bound} > 3,900,000. \
             The published value equals {mod2} x {mod25} (the unstable mod-2 index in \
             place of the stabilized 2-adic one). Felsch enumeration at the \
             {MAX_BUDGET}-coset ceiling did not close ({live} live, {defined} defined), \
             so the exact index (>= {bound}) remains open."
        ),
    }
}

#[test]
fn acceptance_05_gamma_index_formula() {
    let start = Instant::now();
    for (d1, d2, expected) in [
        (1u32, 1u32, 1u64),
        (2, 1, 15),
        (3, 1, 80),
        (4, 4, 2880),
        (6, 1, 1200),
        (9, 3, 51840),
    ] {
        assert_eq!(gamma_index(d1, d2).unwrap(), BigUint::from(expected), "Gamma({d1},{d2})");
    }
    assert!(start.elapsed().as_millis() < 1000);
    println!("ACCEPTANCE 5 (Gamma indices 1, 15, 80, 2880, 1200, 51840, instantaneous): PASS");
}

/// The survey table for N <= 9: rows N, columns the 14 hypergeometric cases
/// in catalog order (1,4), (1,3), (1,2), (2,4), (2,3), (3,4), (4,5), (4,4),
/// (5,5), (6,5), (8,6), (9,6), (12,7), (16,8).
const SECTION8_ORACLE: [(u32, [u64; 14]); 8] = [
    (2, [10, 6, 10, 90, 60, 10, 60, 90, 6, 60, 90, 10, 60, 90]),
    (3, [1, 1, 1, 1, 1, 720, 1, 1, 1, 720, 1, 640, 720, 1]),
    (4, [160, 6, 10, 2880, 240, 160, 3840, 5760, 6, 240, 5760, 10, 3840, 5760]),
    (5, [1, 1, 1, 1, 1, 1, 1, 1, 14976, 1, 1, 1, 1, 1]),
    (6, [10, 6, 10, 90, 60, 7200, 60, 90, 6, 43200, 90, 6400, 43200, 90]),
    (7, [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
    (8, [160, 6, 10, 46080, 960, 160, 15360, 184_320, 6, 960, 368_640, 10, 15360, 368_640]),
    (9, [1, 1, 1, 1, 1, 19440, 1, 1, 1, 19440, 1, 466_560, 19440, 1]),
];

fn hypergeometric_cases() -> Vec<(u32, u32)> {
    builtin_catalog().hypergeometric().map(|r| (r.d, r.k)).collect()
}

#[test]
fn acceptance_06_section8_table() {
    let cases = hypergeometric_cases();
    assert_eq!(cases.len(), 14);
    for (n, row) in SECTION8_ORACLE {
        for (&(d, k), &expected) in cases.iter().zip(&row) {
            let start = Instant::now();
            let index = monodromy_mod_index(d, k, &[], n, None).unwrap().index;
            assert_eq!(index, BigUint::from(expected), "({d},{k}) mod {n}");
            assert!(start.elapsed().as_secs() < 60, "({d},{k}) mod {n} took {:?}", start.elapsed());
        }
    }
    println!("ACCEPTANCE 6 (survey table: all 112 cells with N <= 9 exact, each < 60 s): PASS");
}

#[test]
#[ignore = "long tier: the three large prime-power cells, ~1 minute; run with --ignored"]
fn acceptance_06_long_spot_cells() {
    for (d, k, n, expected) in [
        (5u32, 5u32, 25u32, 46_800_000u64),
        (9, 6, 27, 113_374_080),
        (16, 8, 16, 23_592_960),
    ] {
        let index = monodromy_mod_index(d, k, &[], n, None).unwrap().index;
        assert_eq!(index, BigUint::from(expected), "({d},{k}) mod {n}");
    }
    println!(
        "ACCEPTANCE 6 (long tier: (5,5) mod 25 = 46,800,000, (9,6) mod 27 = 113,374,080, \
         (16,8) mod 16 = 23,592,960): PASS"
    );
}

#[test]
fn acceptance_07_theorem4_reports() {
    let report = geometry::verify_theorem4().unwrap();
    assert_eq!(report.g13_order, 120);
    assert_eq!(report.g12_order, 72);
    assert_eq!(report.g13_index, 6);
    assert_eq!(report.g12_index, 10);
    assert!(report.g13_equals_pentad_stabilizer);
    assert!(report.g12_equals_syntheme_stabilizer);
    assert!(report.g13_generators_in_stabilizer);
    assert!(report.g12_generators_in_stabilizer);
    // The mod-2 indices match the coset-enumeration indices of criterion 1.
    assert_eq!(tc_index(1, 3, &[], "felsch", 100_000), report.g13_index as u64);
    assert_eq!(tc_index(1, 2, &[], "felsch", 100_000), report.g12_index as u64);
    println!(
        "ACCEPTANCE 7 (mod-2 stabilizers: orders 120 and 72, indices 6 and 10 \
         matching enumeration, generators contained): PASS"
    );
}

#[test]
fn acceptance_08_geometry_enumerations() {
    let start = Instant::now();
    let pentads = geometry::enumerate_pentads();
    let synthemes = geometry::enumerate_synthemes();
    let spreads = geometry::enumerate_line_pentads();
    assert_eq!(pentads.len(), 6);
    assert_eq!(synthemes.len(), 10);
    assert_eq!(spreads.len(), 6);
    fn as_set<T: Ord>(v: Vec<T>) -> BTreeSet<T> {
        v.into_iter().collect()
    }
    assert_eq!(as_set(pentads), as_set(geometry::PENTADS.to_vec()));
    assert_eq!(as_set(synthemes), as_set(geometry::SYNTHEMES.to_vec()));
    assert_eq!(as_set(spreads), as_set(geometry::LINE_PENTADS.to_vec()));

    // T_a is the transposition (1,2) of pentads.
    let ta = geometry::transvection(geometry::point_from_label('a').unwrap());
    assert_eq!(geometry::pentad_permutation(&ta).unwrap(), [1, 0, 2, 3, 4, 5]);

    // The displayed pentad actions of M(1,3) and N.
    let gens = symplectic_mod_generators(&{
        let (m, n) = sp4mono::catalog::integral_generators(1, 3);
        vec![m, n]
    }, 2)
    .unwrap();
    assert_eq!(geometry::pentad_permutation(&gens[0]).unwrap(), [0, 1, 5, 4, 2, 3]);
    assert_eq!(geometry::pentad_permutation(&gens[1]).unwrap(), [4, 1, 2, 3, 0, 5]);

    assert!(start.elapsed().as_millis() < 1000, "took {:?}", start.elapsed());
    println!(
        "ACCEPTANCE 8 (geometry: 6 pentads, 10 synthemes, 6 line pentads matching the \
         published lists; T_a = (1,2); M, N pentad actions match; < 1 s): PASS"
    );
}

#[test]
fn acceptance_09_catalog_property_suite() {
    let catalog = builtin_catalog();
    assert_eq!(catalog.records().len(), 20);
    let mut anomalies = Vec::new();
    for record in catalog.records() {
        // validate() checks: generators symplectic, Gamma(d, gcd(d,k))
        // membership, the k-identity (or its flagged violation),
        // dk_from_exponents, and the discriminant.
        record.validate().unwrap();
        if record.k_identity_anomaly {
            anomalies.push(record.aesz);
        }
        // The generator words evaluate to N and M(d,k).
        let (g1, g2) = monodromy_words(record.d, record.k);
        let (m, n) = record.generators();
        assert_eq!(g1.evaluate(), n, "AESZ {} g1", record.aesz);
        assert_eq!(g2.evaluate(), m, "AESZ {} g2", record.aesz);
    }
    assert_eq!(anomalies, [33]);
    // The corrected discriminant for (1,2), against the misprinted 86624.
    let r12 = catalog.hypergeometric_by_dk(1, 2).unwrap();
    assert_eq!(r12.discriminant, Some(186_624));
    // The Lambda = 1 boundary cases are exactly (2,4), (9,6), (16,8).
    let boundary: Vec<(u32, u32)> = catalog
        .hypergeometric()
        .filter(|r| lambda_of(r.d, r.k) == rat(1))
        .map(|r| (r.d, r.k))
        .collect();
    assert_eq!(boundary, [(2, 4), (9, 6), (16, 8)]);
    // The boundary is genuinely ambiguous: (9,6) is proved finite while the
    // other two Lambda = 1 cases are proved infinite.
    assert_eq!(theorem_status(9, 6), Some(IndexStatus::Finite));
    assert_eq!(theorem_status(2, 4), Some(IndexStatus::Infinite));
    assert_eq!(theorem_status(16, 8), Some(IndexStatus::Infinite));
    println!(
        "ACCEPTANCE 9 (catalog suite: 20 records validated, generator words evaluate to \
         M and N, anomaly set {{33}}, discriminant 186624, boundary set \
         {{(2,4),(9,6),(16,8)}}): PASS"
    );
}

#[test]
fn acceptance_10_oracle_equivalence() {
    // (a) decompose<->evaluate round-trip on 1,000 random words of length <= 20.
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let letters = proptest::collection::vec(0u8..12, 0..=20);
    runner
        .run(&letters, |letters| {
            let mut word = Word::identity();
            for l in letters {
                let gen = Gen::ALL[usize::from(l) / 2];
                word.push(gen, if l % 2 == 0 { 1 } else { -1 });
            }
            let matrix = word.evaluate();
            let rewritten = decompose(&matrix).unwrap();
            prop_assert_eq!(rewritten.evaluate(), matrix);
            Ok(())
        })
        .unwrap();

    // (b) BFS closure vs Schreier-Sims agreement on every feasible
    // (record, N <= 8) pair; a pair is feasible when the image order fits
    // under the BFS element cap.
    let sims = order_method_by_name("schreier_sims").unwrap();
    let mut compared = 0;
    for record in builtin_catalog().records() {
        for n in 2..=8u32 {
            let gens = symplectic_mod_generators(&record.all_generators(), n).unwrap();
            let order = sims.order(&gens, n).unwrap();
            if order <= BigUint::from(BFS_CAP) {
                let elements = bfs_elements(&gens, n).unwrap();
                assert_eq!(
                    BigUint::from(elements.len()),
                    order,
                    "AESZ {} mod {n}",
                    record.aesz
                );
                compared += 1;
            }
        }
    }
    assert!(compared >= 60, "only {compared} feasible pairs compared");

    // (c) Consistency across the computed survey cells: indices at coprime
    // moduli multiply (6 = 2 x 3), and the index at m divides the index at n
    // whenever m | n.
    let cases = hypergeometric_cases();
    let cell = |d: u32, k: u32, n: u32| monodromy_mod_index(d, k, &[], n, None).unwrap().index;
    for &(d, k) in &cases {
        let at: Vec<BigUint> = (2..=9).map(|n| cell(d, k, n)).collect();
        let get = |n: u32| &at[(n - 2) as usize];
        assert_eq!(get(6), &(get(2) * get(3)), "({d},{k}): mod 6 vs mod 2 x mod 3");
        for (m, n) in [(2u32, 4u32), (2, 6), (2, 8), (3, 6), (3, 9), (4, 8)] {
            assert!(
                (get(n) % get(m)).is_zero(),
                "({d},{k}): index mod {m} does not divide index mod {n}"
            );
        }
    }
    println!(
        "ACCEPTANCE 10 (oracles: 1,000 random-word decompose round-trips; bfs and \
         schreier_sims agree on {compared} feasible pairs; survey cells multiply at \
         coprime moduli and divide along modulus towers): PASS"
    );
}

/// The two finite-index cases published only as lower bounds: enumeration is
/// expected to exhaust any desk budget, and the congruence images supply the
/// provable lower bound. For (6,5) the bound reproduces the published
/// 18,662,400 exactly. For (9,6) the provable bound is
/// 10 x 113,374,080 = 1,133,740,800 — the published 10,203,667,200 uses a
/// mod-2 factor of 90 that contradicts the survey table's own value 10.
#[test]
#[ignore = "long tier: two enumerations run to the 10M default budget, ~1 minute; run with --ignored"]
fn acceptance_annex_6_5_and_9_6_bounds() {
    let sims = order_method_by_name("schreier_sims").unwrap();
    for (d, k, bound) in [(6u32, 5u32, 18_662_400u64), (9, 6, 1_133_740_800)] {
        let outcome = enumerate_monodromy(d, k, &[], strategy_by_name("hlt").unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .outcome;
        assert!(
            matches!(outcome, Outcome::BudgetExceeded { .. }),
            "({d},{k}) unexpectedly closed: {outcome:?}"
        );
        let cells: Vec<(u32, BigUint)> = [16u32, 27, 25]
            .iter()
            .map(|&n| (n, monodromy_mod_index(d, k, &[], n, Some(sims)).unwrap().index))
            .collect();
        assert_eq!(crt_lower_bound(&cells).unwrap(), BigUint::from(bound), "({d},{k})");
    }
    println!(
        "ACCEPTANCE annex ((6,5) and (9,6) report budget-exceeded with lower bounds \
         18,662,400 and 1,133,740,800): PASS"
    );
}
