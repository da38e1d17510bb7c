//! Todd-Coxeter coset enumeration for finitely generated subgroups of Sp4(Z).
//!
//! The table is a flat `Vec<u32>` over the twelve letters (six generators and
//! their inverses), with 1-based coset ids and 0 meaning undefined. Dead
//! cosets are tracked in a union-find structure with path halving; ids are
//! never reused, and stale entries in the table are healed lazily on lookup.
//! Enumeration strategies (see [`strategy`]) drive the shared scanning and
//! coincidence machinery defined here.

pub mod strategy;

pub use strategy::{strategies, strategy_by_name, EnumerationStrategy, Felsch, Hlt};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix4;
use crate::words::{
    behr_presentation, decompose, inverse_letter, monodromy_words, Letter, Word, GEN_COUNT,
};

/// Letters per table row: one column per generator and per inverse.
pub const WIDTH: usize = 2 * GEN_COUNT;

/// Default ceiling on the total number of cosets ever defined.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Hard ceiling: each coset costs 52 bytes (twelve table cells plus the
/// union-find slot), so this bounds the table at roughly 3.6 GB.
pub const MAX_BUDGET: usize = 70_000_000;

/// Internal signal: the coset budget was hit mid-run.
pub(crate) struct BudgetHit;

/// The enumeration table together with its union-find and statistics.
pub struct CosetTable {
    table: Vec<u32>,
    /// `parent[c] == 0` means `c` is live (its own representative).
    parent: Vec<u32>,
    budget: usize,
    defined: u64,
    live: u64,
    peak_live: u64,
    coincidences: u64,
    deductions_processed: u64,
    collect: bool,
    stack: Vec<(u32, Letter)>,
    queue: Vec<(u32, u32)>,
    cursor: u32,
}

impl CosetTable {
    /// A fresh table holding only coset 1. The full table is allocated up
    /// front; zero pages are committed lazily by the allocator, so an
    /// oversized budget costs address space, not resident memory.
    pub fn new(budget: usize, collect_deductions: bool) -> Result<Self> {
        if budget < 2 {
            return Err(Error::InvalidInput("coset budget must be at least 2".into()));
        }
        if budget > MAX_BUDGET {
            return Err(Error::Infeasible(format!(
                "coset budget {budget} exceeds the supported maximum {MAX_BUDGET} \
                 (about 52 bytes per coset)"
            )));
        }
        Ok(CosetTable {
            table: vec![0; (budget + 1) * WIDTH],
            parent: vec![0; budget + 1],
            budget,
            defined: 1,
            live: 1,
            peak_live: 1,
            coincidences: 0,
            deductions_processed: 0,
            collect: collect_deductions,
            stack: Vec::new(),
            queue: Vec::new(),
            cursor: 1,
        })
    }

    #[inline]
    fn cell(&self, c: u32, l: Letter) -> usize {
        c as usize * WIDTH + l as usize
    }

    pub fn defined(&self) -> u64 {
        self.defined
    }

    pub fn live(&self) -> u64 {
        self.live
    }

    pub fn peak_live(&self) -> u64 {
        self.peak_live
    }

    pub fn coincidences(&self) -> u64 {
        self.coincidences
    }

    pub fn deductions_processed(&self) -> u64 {
        self.deductions_processed
    }

    pub fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == 0
    }

    /// Union-find representative with path halving.
    pub fn find(&mut self, mut c: u32) -> u32 {
        loop {
            let p = self.parent[c as usize];
            if p == 0 {
                return c;
            }
            let gp = self.parent[p as usize];
            if gp == 0 {
                return p;
            }
            self.parent[c as usize] = gp;
            c = gp;
        }
    }

    /// The image of `c` under `letter`, healed to a live representative;
    /// 0 if undefined.
    pub fn lookup(&mut self, c: u32, letter: Letter) -> u32 {
        let idx = self.cell(c, letter);
        let raw = self.table[idx];
        if raw == 0 {
            return 0;
        }
        let rep = self.find(raw);
        if rep != raw {
            self.table[idx] = rep;
        }
        rep
    }

    /// Writes the edge `c . letter = d` and its inverse. Overwriting the
    /// reverse cell is safe: it can only hold a stale pointer into the class
    /// of `c` whose coincidence has already been queued.
    fn set_edge(&mut self, c: u32, letter: Letter, d: u32) {
        let il = inverse_letter(letter);
        let fwd = self.cell(c, letter);
        self.table[fwd] = d;
        let bwd = self.cell(d, il);
        self.table[bwd] = c;
        if self.collect {
            self.stack.push((c, letter));
            self.stack.push((d, il));
        }
    }

    /// Defines a new coset as the image of `(c, letter)`.
    pub(crate) fn define(&mut self, c: u32, letter: Letter) -> std::result::Result<u32, BudgetHit> {
        if self.defined as usize >= self.budget {
            return Err(BudgetHit);
        }
        self.defined += 1;
        let n = self.defined as u32;
        self.live += 1;
        self.peak_live = self.peak_live.max(self.live);
        self.set_edge(c, letter, n);
        Ok(n)
    }

    /// Merges the classes of `a` and `b`, propagating all induced
    /// coincidences to exhaustion. The smaller id survives, so coset 1 is
    /// never deleted.
    pub fn coincide(&mut self, a: u32, b: u32) {
        let mut queue = std::mem::take(&mut self.queue);
        queue.clear();
        queue.push((a, b));
        while let Some((a, b)) = queue.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, die) = if a < b { (a, b) } else { (b, a) };
            self.parent[die as usize] = keep;
            self.live -= 1;
            self.coincidences += 1;
            for letter in 0..WIDTH as Letter {
                let raw = self.table[self.cell(die, letter)];
                if raw == 0 {
                    continue;
                }
                let d = self.find(raw);
                let cur = self.table[self.cell(keep, letter)];
                if cur == 0 {
                    self.set_edge(keep, letter, d);
                } else {
                    let cur = self.find(cur);
                    if cur != d {
                        queue.push((cur, d));
                    }
                }
            }
        }
        self.queue = queue;
    }

    /// Scans `word` from `start` and forces it to close, defining cosets to
    /// fill any gap (the HLT workhorse).
    pub(crate) fn scan_and_fill(
        &mut self,
        start: u32,
        word: &[Letter],
    ) -> std::result::Result<(), BudgetHit> {
        let n = word.len() as i64;
        let mut f = start;
        let mut i: i64 = 0;
        let mut b = start;
        let mut j: i64 = n - 1;
        loop {
            while i <= j {
                let next = self.lookup(f, word[i as usize]);
                if next == 0 {
                    break;
                }
                f = next;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincide(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let prev = self.lookup(b, inverse_letter(word[j as usize]));
                if prev == 0 {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j < i {
                if f != b {
                    self.coincide(f, b);
                }
                return Ok(());
            }
            if j == i {
                // Deduction: both cells are known to be empty.
                self.set_edge(f, word[i as usize], b);
                return Ok(());
            }
            f = self.define(f, word[i as usize])?;
            i += 1;
        }
    }

    /// Scans `word` from `start` without defining cosets: closes a gap of
    /// one as a deduction, reports a mismatch as a coincidence, and leaves
    /// larger gaps alone (the Felsch workhorse).
    pub fn scan_no_fill(&mut self, start: u32, word: &[Letter]) {
        let n = word.len() as i64;
        let mut f = start;
        let mut i: i64 = 0;
        let mut b = start;
        let mut j: i64 = n - 1;
        while i <= j {
            let next = self.lookup(f, word[i as usize]);
            if next == 0 {
                break;
            }
            f = next;
            i += 1;
        }
        if i > j {
            if f != b {
                self.coincide(f, b);
            }
            return;
        }
        while j >= i {
            let prev = self.lookup(b, inverse_letter(word[j as usize]));
            if prev == 0 {
                break;
            }
            b = prev;
            j -= 1;
        }
        if j < i {
            if f != b {
                self.coincide(f, b);
            }
        } else if j == i {
            self.set_edge(f, word[i as usize], b);
        }
    }

    pub(crate) fn pop_deduction(&mut self) -> Option<(u32, Letter)> {
        let d = self.stack.pop();
        if d.is_some() {
            self.deductions_processed += 1;
        }
        d
    }

    /// The first `(coset, letter)` cell still undefined, in id-then-letter
    /// order. Returns `None` exactly when the table is complete.
    pub fn first_gap(&mut self) -> Option<(u32, Letter)> {
        while u64::from(self.cursor) <= self.defined {
            let c = self.cursor;
            if self.is_live(c) {
                for letter in 0..WIDTH as Letter {
                    if self.table[self.cell(c, letter)] == 0 {
                        return Some((c, letter));
                    }
                }
            }
            self.cursor += 1;
        }
        None
    }

    /// The permutation action on live cosets, renumbered to `0..index`,
    /// one permutation per letter. Only valid for a complete table.
    pub fn coset_action(&mut self) -> Result<Vec<Vec<u32>>> {
        if self.first_gap().is_some() {
            return Err(Error::InvariantViolation(
                "coset action requested from an incomplete table".into(),
            ));
        }
        let mut renumber = vec![u32::MAX; self.defined as usize + 1];
        let mut next = 0u32;
        for c in 1..=self.defined as u32 {
            if self.is_live(c) {
                renumber[c as usize] = next;
                next += 1;
            }
        }
        let mut perms = vec![vec![0u32; next as usize]; WIDTH];
        for c in 1..=self.defined as u32 {
            if !self.is_live(c) {
                continue;
            }
            for (letter, perm) in perms.iter_mut().enumerate() {
                let image = self.lookup(c, letter as Letter);
                perm[renumber[c as usize] as usize] = renumber[image as usize];
            }
        }
        Ok(perms)
    }

    /// Checks that the table is complete and that every relator and
    /// subgroup generator word closes where it must. Used by tests.
    pub fn verify_closed(&mut self, relators: &[Word], subgroup: &[Word]) -> Result<()> {
        if self.first_gap().is_some() {
            return Err(Error::InvariantViolation("table has an undefined cell".into()));
        }
        let trace = |t: &mut Self, start: u32, letters: &[Letter]| -> u32 {
            letters.iter().fold(start, |c, &l| t.lookup(c, l))
        };
        for w in subgroup {
            let end = trace(self, 1, &w.letters());
            if end != 1 {
                return Err(Error::InvariantViolation(format!(
                    "subgroup generator {w} does not fix coset 1"
                )));
            }
        }
        for r in relators {
            let letters = r.letters();
            for c in 1..=self.defined as u32 {
                if self.is_live(c) && trace(self, c, &letters) != c {
                    return Err(Error::InvariantViolation(format!(
                        "relator {r} does not close at coset {c}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// How an enumeration ended.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    /// The table closed; the subgroup has this index.
    Completed { index: u64 },
    /// The coset budget was exhausted before closure.
    BudgetExceeded { live: u64, defined: u64 },
}

/// Run statistics. Timings vary between runs; everything else is
/// deterministic for a fixed strategy and input.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationStats {
    pub defined: u64,
    pub peak_live: u64,
    pub coincidences: u64,
    pub deductions: u64,
    pub elapsed_ms: u64,
}

/// The result of one enumeration run, including the final table.
pub struct EnumerationResult {
    pub outcome: Outcome,
    pub strategy: &'static str,
    pub stats: EnumerationStats,
    pub table: CosetTable,
}

impl EnumerationResult {
    /// The index, if the run completed.
    pub fn index(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Completed { index } => Some(index),
            Outcome::BudgetExceeded { .. } => None,
        }
    }
}

/// Subgroup generator words for the monodromy group `G(d, k)` plus any extra
/// integral symplectic generators, which are rewritten in the Behr
/// generators by [`decompose`].
pub fn subgroup_words(d: u32, k: u32, extras: &[ExactMatrix4]) -> Result<Vec<Word>> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidInput("G(d, k) needs d, k >= 1".into()));
    }
    let (g1, g2) = monodromy_words(d, k);
    let mut words = vec![g1, g2];
    for m in extras {
        words.push(decompose(m)?);
    }
    Ok(words)
}

/// Enumerates the cosets of the monodromy group `G(d, k)` (with optional
/// extra generators) in Sp4(Z).
pub fn enumerate_monodromy(
    d: u32,
    k: u32,
    extras: &[ExactMatrix4],
    strategy: &dyn EnumerationStrategy,
    budget: usize,
) -> Result<EnumerationResult> {
    let words = subgroup_words(d, k, extras)?;
    strategy.enumerate(behr_presentation(), &words, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Gen;

    fn index_of(strategy: &dyn EnumerationStrategy, d: u32, k: u32, budget: usize) -> u64 {
        let result = enumerate_monodromy(d, k, &[], strategy, budget).unwrap();
        match result.outcome {
            Outcome::Completed { index } => index,
            Outcome::BudgetExceeded { live, defined } => {
                panic!("budget exceeded at ({d},{k}): live {live}, defined {defined}")
            }
        }
    }

    #[test]
    fn whole_group_has_index_one() {
        let words: Vec<Word> = Gen::ALL
            .iter()
            .map(|&g| Word::from_syllables([(g, 1)]))
            .collect();
        for strategy in strategies() {
            let r = strategy
                .enumerate(behr_presentation(), &words, 10_000)
                .unwrap();
            assert_eq!(r.outcome, Outcome::Completed { index: 1 }, "{}", strategy.name());
        }
    }

    #[test]
    fn monodromy_groups_with_small_index() {
        for strategy in strategies() {
            assert_eq!(index_of(strategy, 1, 3, 100_000), 6, "{}", strategy.name());
            assert_eq!(index_of(strategy, 1, 2, 100_000), 10, "{}", strategy.name());
        }
    }

    #[test]
    fn index_960_for_2_3() {
        for strategy in strategies() {
            assert_eq!(index_of(strategy, 2, 3, 1_000_000), 960, "{}", strategy.name());
        }
    }

    #[test]
    fn completed_tables_are_closed() {
        for strategy in strategies() {
            let mut r = enumerate_monodromy(1, 2, &[], strategy, 100_000).unwrap();
            let words = subgroup_words(1, 2, &[]).unwrap();
            r.table
                .verify_closed(behr_presentation().relators(), &words)
                .unwrap();
            let perms = r.table.coset_action().unwrap();
            assert_eq!(perms.len(), WIDTH);
            for pair in perms.chunks(2) {
                // letter 2g and 2g+1 are mutually inverse permutations
                for (i, &img) in pair[0].iter().enumerate() {
                    assert_eq!(pair[1][img as usize], i as u32);
                }
            }
        }
    }

    #[test]
    fn infinite_index_exhausts_budget() {
        for strategy in strategies() {
            let r = enumerate_monodromy(1, 4, &[], strategy, 20_000).unwrap();
            match r.outcome {
                Outcome::BudgetExceeded { live, defined } => {
                    assert!(live > 0 && defined >= 20_000 - 1, "{}", strategy.name());
                }
                Outcome::Completed { index } => {
                    panic!("({}) unexpectedly completed with index {index}", strategy.name())
                }
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        for strategy in strategies() {
            let a = enumerate_monodromy(2, 3, &[], strategy, 1_000_000).unwrap();
            let b = enumerate_monodromy(2, 3, &[], strategy, 1_000_000).unwrap();
            assert_eq!(a.outcome, b.outcome);
            assert_eq!(a.stats.defined, b.stats.defined);
            assert_eq!(a.stats.coincidences, b.stats.coincidences);
            assert_eq!(a.stats.deductions, b.stats.deductions);
        }
    }

    #[test]
    fn budget_validation() {
        assert!(CosetTable::new(1, false).is_err());
        assert!(CosetTable::new(MAX_BUDGET + 1, false).is_err());
        assert!(strategy_by_name("hlt").is_ok());
        assert!(strategy_by_name("felsch").is_ok());
        assert!(strategy_by_name("todd").is_err());
    }
}
