//! The two enumeration strategies, behind a common trait.
//!
//! HLT scans every relator at every live coset and defines cosets eagerly to
//! close each scan; it is fast but leaves many dead cosets behind. Felsch
//! defines the first undefined table cell and then propagates all deductions
//! through precomputed relator rotations before defining again; it runs a
//! tighter table, which is what makes the largest enumerations fit in
//! memory.

use std::collections::HashSet;
use std::time::Instant;

use super::{BudgetHit, CosetTable, EnumerationResult, EnumerationStats, Outcome, WIDTH};
use crate::error::{Error, Result};
use crate::words::{inverse_letter, Letter, Presentation, Word};

/// A coset enumeration procedure.
pub trait EnumerationStrategy: Sync {
    fn name(&self) -> &'static str;

    /// Enumerates the cosets of the subgroup generated by `subgroup` inside
    /// the group given by `presentation`, defining at most `budget` cosets.
    fn enumerate(
        &self,
        presentation: &Presentation,
        subgroup: &[Word],
        budget: usize,
    ) -> Result<EnumerationResult>;
}

/// The registered strategies.
pub fn strategies() -> [&'static dyn EnumerationStrategy; 2] {
    [&Hlt, &Felsch]
}

pub fn strategy_by_name(name: &str) -> Result<&'static dyn EnumerationStrategy> {
    strategies()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| {
            Error::UnknownName(format!(
                "enumeration strategy {name:?} (expected \"hlt\" or \"felsch\")"
            ))
        })
}

fn letter_words(words: &[Word]) -> Vec<Vec<Letter>> {
    words
        .iter()
        .map(|w| w.letters())
        .filter(|l| !l.is_empty())
        .collect()
}

fn finish(
    started: Instant,
    table: CosetTable,
    run: std::result::Result<(), BudgetHit>,
    strategy: &'static str,
) -> Result<EnumerationResult> {
    let stats = EnumerationStats {
        defined: table.defined(),
        peak_live: table.peak_live(),
        coincidences: table.coincidences(),
        deductions: table.deductions_processed(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    let outcome = match run {
        Ok(()) => Outcome::Completed {
            index: table.live(),
        },
        Err(BudgetHit) => Outcome::BudgetExceeded {
            live: table.live(),
            defined: table.defined(),
        },
    };
    Ok(EnumerationResult {
        outcome,
        strategy,
        stats,
        table,
    })
}

/// Haselgrove-Leech-Trotter enumeration.
pub struct Hlt;

impl EnumerationStrategy for Hlt {
    fn name(&self) -> &'static str {
        "hlt"
    }

    fn enumerate(
        &self,
        presentation: &Presentation,
        subgroup: &[Word],
        budget: usize,
    ) -> Result<EnumerationResult> {
        let started = Instant::now();
        let mut table = CosetTable::new(budget, false)?;
        let relators = letter_words(presentation.relators());
        let subgroup = letter_words(subgroup);
        let run = hlt_run(&mut table, &relators, &subgroup);
        finish(started, table, run, "hlt")
    }
}

fn hlt_run(
    table: &mut CosetTable,
    relators: &[Vec<Letter>],
    subgroup: &[Vec<Letter>],
) -> std::result::Result<(), BudgetHit> {
    for w in subgroup {
        table.scan_and_fill(1, w)?;
    }
    // A single increasing pass suffices: ids are never reused, every coset
    // defined during the pass is visited later, scans force closure at the
    // visited coset, and coincidence merges only ever add edges.
    let mut alpha: u32 = 1;
    while u64::from(alpha) <= table.defined() {
        if table.is_live(alpha) {
            for r in relators {
                table.scan_and_fill(alpha, r)?;
                if !table.is_live(alpha) {
                    break;
                }
            }
            if table.is_live(alpha) {
                // Row filling keeps the completeness argument honest: a cell
                // not lying on any scanned relator path would otherwise
                // survive the pass undefined.
                for letter in 0..WIDTH as Letter {
                    if table.lookup(alpha, letter) == 0 {
                        table.define(alpha, letter)?;
                    }
                }
            }
        }
        alpha += 1;
    }
    Ok(())
}

/// Felsch enumeration.
pub struct Felsch;

impl EnumerationStrategy for Felsch {
    fn name(&self) -> &'static str {
        "felsch"
    }

    fn enumerate(
        &self,
        presentation: &Presentation,
        subgroup: &[Word],
        budget: usize,
    ) -> Result<EnumerationResult> {
        let started = Instant::now();
        let mut table = CosetTable::new(budget, true)?;
        let rotations = rotation_table(presentation);
        let subgroup = letter_words(subgroup);
        let run = felsch_run(&mut table, &rotations, &subgroup);
        finish(started, table, run, "felsch")
    }
}

/// Every cyclic rotation of every relator and inverse relator, bucketed by
/// first letter and sorted for deterministic scan order.
fn rotation_table(presentation: &Presentation) -> Vec<Vec<Vec<Letter>>> {
    let mut buckets: Vec<HashSet<Vec<Letter>>> = vec![HashSet::new(); WIDTH];
    for r in presentation.relators() {
        let forward = r.letters();
        let inverse: Vec<Letter> = forward.iter().rev().map(|&l| inverse_letter(l)).collect();
        for w in [forward, inverse] {
            for i in 0..w.len() {
                let rotation: Vec<Letter> =
                    w[i..].iter().chain(&w[..i]).copied().collect();
                buckets[rotation[0] as usize].insert(rotation);
            }
        }
    }
    buckets
        .into_iter()
        .map(|set| {
            let mut v: Vec<_> = set.into_iter().collect();
            v.sort();
            v
        })
        .collect()
}

fn felsch_run(
    table: &mut CosetTable,
    rotations: &[Vec<Vec<Letter>>],
    subgroup: &[Vec<Letter>],
) -> std::result::Result<(), BudgetHit> {
    for w in subgroup {
        table.scan_and_fill(1, w)?;
    }
    loop {
        while let Some((c, letter)) = table.pop_deduction() {
            for w in &rotations[letter as usize] {
                // The coset may die while its own deductions are processed;
                // always scan from the live representative.
                let c = table.find(c);
                table.scan_no_fill(c, w);
            }
        }
        match table.first_gap() {
            None => return Ok(()),
            Some((c, letter)) => {
                table.define(c, letter)?;
            }
        }
    }
}
