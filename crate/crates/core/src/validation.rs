//! Violation records shared by the design and partition validators.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    /// A pair of points is in no block.
    CoverageMissing,
    /// A pair of points is in more than one block.
    CoverageDuplicate,
    /// A block has an out-of-range or repeated entry, or fewer than two points.
    StructuralViolation,
    /// A listed clique contains a non-adjacent pair.
    NonCliqueBlock,
    EdgeUncovered,
    EdgeDuplicated,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::CoverageMissing => "coverage-missing",
            ViolationKind::CoverageDuplicate => "coverage-duplicate",
            ViolationKind::StructuralViolation => "structural",
            ViolationKind::NonCliqueBlock => "non-clique-block",
            ViolationKind::EdgeUncovered => "edge-uncovered",
            ViolationKind::EdgeDuplicated => "edge-duplicated",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The offending pair, or the offending block's points.
    pub items: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.kind, self.items)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of validating a design or a clique partition.
///
/// `is_nontrivial` and `is_near_pencil` only carry meaning for designs; the
/// partition validator leaves them `false`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub is_nontrivial: bool,
    pub is_near_pencil: bool,
}

impl ValidationReport {
    pub(crate) fn from_violations(violations: Vec<Violation>) -> Self {
        Self { ok: violations.is_empty(), violations, is_nontrivial: false, is_near_pencil: false }
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Pair counter over `0..n`, indexed by the unordered pair.
pub(crate) struct PairCounter {
    n: usize,
    counts: Vec<u8>,
}

impl PairCounter {
    pub(crate) fn new(n: usize) -> Self {
        Self { n, counts: vec![0; n * n.saturating_sub(1) / 2] }
    }

    fn index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // row a holds pairs (a, a+1..n)
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub(crate) fn bump(&mut self, a: usize, b: usize) {
        let i = self.index(a, b);
        self.counts[i] = self.counts[i].saturating_add(1);
    }

    pub(crate) fn get(&self, a: usize, b: usize) -> u8 {
        self.counts[self.index(a, b)]
    }

    /// Adds every pair inside `block` (entries assumed distinct and in range).
    pub(crate) fn bump_block(&mut self, block: &[usize]) {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                self.bump(a, b);
            }
        }
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        (0..self.n).flat_map(move |a| (a + 1..self.n).map(move |b| (a, b, self.get(a, b))))
    }
}

/// Checks a block's entries are distinct and below `n`; returns a detail
/// message describing the first problem found.
pub(crate) fn structural_problem(n: usize, block: &[usize]) -> Option<String> {
    if let Some(&x) = block.iter().find(|&&x| x >= n) {
        return Some(format!("point {x} out of range 0..{n}"));
    }
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Some(format!("point {} repeated", w[0]));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 0..12 {
            let c = PairCounter::new(n);
            let mut seen = vec![false; c.counts.len()];
            for a in 0..n {
                for b in a + 1..n {
                    let i = c.index(a, b);
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(i, c.index(b, a));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
