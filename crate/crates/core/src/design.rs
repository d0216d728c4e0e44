//! Designs on points `0..n`: the PBD carrier, its statistics and resolutions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::validation::{structural_problem, PairCounter, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("block {index} has size {size}; blocks need at least two points")]
    BlockTooSmall { index: usize, size: usize },
    #[error("block {index}: {detail}")]
    Malformed { index: usize, detail: String },
    #[error("resolution refers to block {0}, which does not exist")]
    BlockIndexOutOfRange(usize),
}

/// A set system on `0..n` kept in canonical form: every block strictly
/// increasing, blocks sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Design {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// A partition of a design's block indices into parallel classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Resolution {
    pub classes: Vec<Vec<usize>>,
}

impl Design {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        Ok(Self::canonicalize(n, blocks)?.0)
    }

    /// Builds a design and remaps `resolution` (indices into `blocks` as
    /// given) onto the canonical block order.
    pub fn with_resolution(
        n: usize,
        blocks: Vec<Vec<usize>>,
        resolution: Vec<Vec<usize>>,
    ) -> Result<(Self, Resolution), DesignError> {
        let (design, position) = Self::canonicalize(n, blocks)?;
        let classes = resolution
            .into_iter()
            .map(|class| {
                class
                    .into_iter()
                    .map(|i| position.get(i).copied().ok_or(DesignError::BlockIndexOutOfRange(i)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((design, Resolution { classes }))
    }

    /// Builds a design from blocks grouped by class; the grouping becomes the
    /// resolution.
    pub fn from_classes(n: usize, classes: Vec<Vec<Vec<usize>>>) -> Result<(Self, Resolution), DesignError> {
        let mut blocks = Vec::new();
        let mut resolution = Vec::with_capacity(classes.len());
        for class in classes {
            let start = blocks.len();
            blocks.extend(class);
            resolution.push((start..blocks.len()).collect());
        }
        Self::with_resolution(n, blocks, resolution)
    }

    /// Returns the canonical design plus, for each input block index, its
    /// index in canonical order.
    fn canonicalize(n: usize, blocks: Vec<Vec<usize>>) -> Result<(Self, Vec<usize>), DesignError> {
        let mut tagged = Vec::with_capacity(blocks.len());
        for (index, mut block) in blocks.into_iter().enumerate() {
            if let Some(detail) = structural_problem(n, &block) {
                return Err(DesignError::Malformed { index, detail });
            }
            if block.len() < 2 {
                return Err(DesignError::BlockTooSmall { index, size: block.len() });
            }
            block.sort_unstable();
            tagged.push((block, index));
        }
        tagged.sort();
        let mut position = vec![0; tagged.len()];
        for (new, (_, old)) in tagged.iter().enumerate() {
            position[*old] = new;
        }
        let blocks = tagged.into_iter().map(|(b, _)| b).collect();
        Ok((Self { n, blocks }, position))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Sum of block sizes.
    pub fn sigma(&self) -> u64 {
        self.blocks.iter().map(|b| b.len() as u64).sum()
    }

    /// Number of blocks through each point.
    pub fn valencies(&self) -> Vec<u64> {
        let mut r = vec![0u64; self.n];
        for block in &self.blocks {
            for &x in block {
                r[x] += 1;
            }
        }
        debug_assert_eq!(r.iter().sum::<u64>(), self.sigma());
        r
    }

    pub fn max_valency(&self) -> u64 {
        self.valencies().into_iter().max().unwrap_or(0)
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Block size -> number of blocks of that size.
    pub fn block_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for b in &self.blocks {
            *h.entry(b.len()).or_insert(0) += 1;
        }
        h
    }

    /// Removes the listed points everywhere, relabels the survivors in order
    /// and drops remnants with fewer than two points.
    pub fn delete_points(&self, points: &[usize]) -> Design {
        let mut gone = vec![false; self.n];
        for &p in points {
            gone[p] = true;
        }
        let mut relabel = vec![usize::MAX; self.n];
        let mut next = 0;
        for x in 0..self.n {
            if !gone[x] {
                relabel[x] = next;
                next += 1;
            }
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&x| !gone[x]).map(|&x| relabel[x]).collect::<Vec<_>>())
            .filter(|b| b.len() >= 2)
            .collect();
        Design::new(next, blocks).expect("deleting points keeps blocks well formed")
    }
}

/// Validates raw blocks as a PBD on `0..n`, including structural problems a
/// [`Design`] would have rejected on construction.
pub fn validate_blocks(n: usize, blocks: &[Vec<usize>]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut counter = PairCounter::new(n);
    for (index, block) in blocks.iter().enumerate() {
        let problem = structural_problem(n, block)
            .or_else(|| (block.len() < 2).then(|| format!("block has {} point(s)", block.len())));
        if let Some(detail) = problem {
            violations.push(Violation {
                kind: ViolationKind::StructuralViolation,
                items: block.clone(),
                detail: format!("block {index}: {detail}"),
            });
            continue;
        }
        counter.bump_block(block);
    }
    for (a, b, c) in counter.pairs() {
        match c {
            0 => violations.push(Violation {
                kind: ViolationKind::CoverageMissing,
                items: vec![a, b],
                detail: String::new(),
            }),
            1 => {}
            c => violations.push(Violation {
                kind: ViolationKind::CoverageDuplicate,
                items: vec![a, b],
                detail: format!("covered {c} times"),
            }),
        }
    }
    let mut report = ValidationReport::from_violations(violations);
    report.is_nontrivial = !blocks.iter().any(|b| b.len() == n);
    report.is_near_pencil = report.ok && n >= 3 && is_near_pencil_shape(n, blocks);
    report
}

fn is_near_pencil_shape(n: usize, blocks: &[Vec<usize>]) -> bool {
    let big = blocks.iter().filter(|b| b.len() == n - 1).count();
    let small = blocks.iter().filter(|b| b.len() == 2).count();
    if n == 3 {
        // every block is both "the" (n-1)-block and a pair
        return big == blocks.len() && big >= 1;
    }
    big == 1 && small + 1 == blocks.len()
}

/// Checks that every pair of points lies in exactly one block.
pub fn validate_pbd(d: &Design) -> ValidationReport {
    validate_blocks(d.n, &d.blocks)
}

/// True iff the classes partition the block indices and each class
/// partitions the point set.
pub fn verify_resolution(d: &Design, r: &Resolution) -> bool {
    let mut used = vec![false; d.block_count()];
    for class in &r.classes {
        let mut hit = vec![false; d.n()];
        for &bi in class {
            if bi >= used.len() || used[bi] {
                return false;
            }
            used[bi] = true;
            for &x in &d.blocks[bi] {
                if hit[x] {
                    return false;
                }
                hit[x] = true;
            }
        }
        if !hit.iter().all(|&h| h) {
            return false;
        }
    }
    used.iter().all(|&u| u)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fano() -> Design {
        Design::new(
            7,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5],
            ],
        )
        .unwrap()
    }

    fn near_pencil_5() -> Design {
        Design::new(5, vec![vec![0, 1, 2, 3], vec![4, 0], vec![4, 1], vec![4, 2], vec![4, 3]]).unwrap()
    }

    #[test]
    fn near_pencil_validates() {
        let d = near_pencil_5();
        let r = validate_pbd(&d);
        assert!(r.ok);
        assert!(r.is_near_pencil);
        assert!(r.is_nontrivial);
        assert_eq!(d.sigma(), 12);
        assert_eq!(d.valencies(), vec![2, 2, 2, 2, 4]);
    }

    #[test]
    fn fano_validates() {
        let d = fano();
        let r = validate_pbd(&d);
        assert!(r.ok && r.is_nontrivial && !r.is_near_pencil);
        // 21 pairs, each block covers 3
        assert_eq!(d.block_count() * 3, 21);
        assert_eq!(d.sigma(), 21);
        assert_eq!(d.valencies(), vec![3; 7]);
    }

    #[test]
    fn double_cover_reported() {
        let d = Design::new(3, vec![vec![0, 1, 2], vec![0, 1]]).unwrap();
        let r = validate_pbd(&d);
        assert!(!r.ok);
        assert_eq!(r.count(ViolationKind::CoverageDuplicate), 1);
        assert_eq!(r.violations[0].items, vec![0, 1]);
        assert_eq!(r.count(ViolationKind::CoverageMissing), 0);
    }

    #[test]
    fn missing_pairs_reported() {
        let d = Design::new(4, vec![vec![0, 1, 2]]).unwrap();
        let r = validate_pbd(&d);
        assert_eq!(r.count(ViolationKind::CoverageMissing), 3);
    }

    #[test]
    fn structural_violations() {
        let r = validate_blocks(3, &[vec![0, 0], vec![1, 5], vec![2]]);
        assert_eq!(r.count(ViolationKind::StructuralViolation), 3);
        assert!(Design::new(3, vec![vec![0, 0]]).is_err());
        assert!(Design::new(3, vec![vec![1]]).is_err());
        assert!(Design::new(3, vec![vec![1, 3]]).is_err());
    }

    #[test]
    fn trivial_design_flags() {
        let d = Design::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let r = validate_pbd(&d);
        assert!(r.ok && !r.is_nontrivial && !r.is_near_pencil);
    }

    #[test]
    fn sigma_and_valency_edge_cases() {
        let empty = Design::new(3, vec![]).unwrap();
        assert_eq!(empty.sigma(), 0);
        let single = Design::new(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(single.valencies(), vec![1, 1]);
        assert_eq!(single.blocks(), &[vec![0, 1]]);
    }

    #[test]
    fn canonical_form_equality() {
        let a = Design::new(4, vec![vec![3, 2], vec![0, 1]]).unwrap();
        let b = Design::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn resolution_checks() {
        // AG(2,2): K4 split into three perfect matchings
        let (d, r) = Design::from_classes(
            4,
            vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]], vec![vec![0, 3], vec![1, 2]]],
        )
        .unwrap();
        assert!(verify_resolution(&d, &r));
        let mut broken = r.clone();
        let moved = broken.classes[0][1];
        broken.classes[0][1] = broken.classes[1][1];
        broken.classes[1][1] = moved;
        assert!(!verify_resolution(&d, &broken));
        let f = fano();
        let all = Resolution { classes: vec![(0..7).collect()] };
        assert!(!verify_resolution(&f, &all));
        let out_of_range = Resolution { classes: vec![vec![0, 9]] };
        assert!(!verify_resolution(&d, &out_of_range));
    }

    #[test]
    fn delete_points_relabels() {
        let d = fano().delete_points(&[6]);
        assert_eq!(d.n(), 6);
        assert!(d.blocks().iter().all(|b| b.len() >= 2));
        assert!(validate_pbd(&d).ok);
    }
}
