//! Generators for the classical designs the constructions are built from.
//!
//! Point labelling is fixed so outputs are canonical:
//! * AG(2,q): the point `(x, y)` over GF(q) has index `x * q + y`, where
//!   field elements are their packed coefficient codes.
//! * PG(2,q): points are homogeneous triples normalised so the first nonzero
//!   coordinate is 1, numbered in lexicographic order:
//!   `(0,0,1)`, then `(0,1,z)`, then `(1,y,z)`.

mod resolvable;

pub use resolvable::{resolvable_design, ResolvableOptions, KIRKMAN_SEARCH_CAP};

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, FiniteField, PrimePower};
use crate::design::{Design, DesignError, Resolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("a one-factorization needs an even vertex count, got {0}")]
    OddOrder(usize),
    #[error("K_{v} needs at least {needed} colour classes, {requested} requested")]
    TooFewClasses { v: usize, needed: usize, requested: usize },
    #[error("resolvable designs are only built for block size 2 or 3, got {0}")]
    UnsupportedK(usize),
    #[error("no resolvable ({v},{k},1) design: need v = 0 mod {k} and v - 1 = 0 mod {km1}", km1 = k - 1)]
    CongruenceFailure { v: usize, k: usize },
    #[error("resolvable triple system search for v = {v} gave up after {nodes} nodes")]
    SearchExhausted { v: usize, nodes: u64 },
}

/// Colour classes of the edges of K_v; each class is a matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    pub v: usize,
    pub classes: Vec<Vec<(usize, usize)>>,
}

impl EdgeColoring {
    /// Every edge of K_v in exactly one class, and every class a matching.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.v * self.v];
        let mut count = 0;
        for class in &self.classes {
            let mut touched = vec![false; self.v];
            for &(a, b) in class {
                if a >= self.v || b >= self.v || a == b || touched[a] || touched[b] {
                    return false;
                }
                touched[a] = true;
                touched[b] = true;
                let (a, b) = (a.min(b), a.max(b));
                if seen[a * self.v + b] {
                    return false;
                }
                seen[a * self.v + b] = true;
                count += 1;
            }
        }
        count == self.v * self.v.saturating_sub(1) / 2
    }

    /// The colouring as a resolvable (v,2,1) design, one class per colour.
    pub fn to_design(&self) -> Result<(Design, Resolution), DesignError> {
        let classes = self.classes.iter().map(|c| c.iter().map(|&(a, b)| vec![a, b]).collect()).collect();
        Design::from_classes(self.v, classes)
    }
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Circle method: vertex `v - 1` is the hub, the rest rotate.
pub fn one_factorization(v: usize) -> Result<EdgeColoring, ClassicalError> {
    if v < 2 || v % 2 == 1 {
        return Err(ClassicalError::OddOrder(v));
    }
    let m = v - 1;
    let classes = (0..m)
        .map(|r| {
            let mut class = vec![edge(r, m)];
            class.extend((1..v / 2).map(|i| edge((r + i) % m, (r + m - i) % m)));
            class.sort_unstable();
            class
        })
        .collect();
    Ok(EdgeColoring { v, classes })
}

/// Proper edge colouring of K_v padded with empty classes to
/// `target_classes`. Odd `v` uses `v` near-perfect matchings (class `i`
/// misses vertex `i`); even `v` uses the one-factorization.
pub fn proper_edge_coloring_complete(v: usize, target_classes: usize) -> Result<EdgeColoring, ClassicalError> {
    let needed = if v.is_multiple_of(2) { v.saturating_sub(1) } else { v };
    if target_classes < needed {
        return Err(ClassicalError::TooFewClasses { v, needed, requested: target_classes });
    }
    let mut coloring = if v.is_multiple_of(2) && v >= 2 {
        one_factorization(v)?
    } else if v % 2 == 1 {
        let classes = (0..v)
            .map(|i| {
                let mut class: Vec<_> = (1..=v / 2).map(|j| edge((i + j) % v, (i + v - j) % v)).collect();
                class.sort_unstable();
                class
            })
            .collect();
        EdgeColoring { v, classes }
    } else {
        EdgeColoring { v, classes: vec![] }
    };
    coloring.classes.resize(target_classes, Vec::new());
    Ok(coloring)
}

/// The affine plane AG(2,q) with its resolution into `q + 1` parallel
/// classes. Class `s` for `s < q` holds the lines `y = s x + b` (slope with
/// packed code `s`); the last class holds the vertical lines `x = c`.
pub fn affine_plane(q: PrimePower) -> Result<(Design, Resolution), ClassicalError> {
    let field = FiniteField::new(q)?;
    Ok(affine_plane_over(&field)?)
}

fn affine_plane_over(field: &FiniteField) -> Result<(Design, Resolution), DesignError> {
    let q = field.size();
    let index = |x: Element, y: Element| x as usize * q + y as usize;
    let mut classes = Vec::with_capacity(q + 1);
    for s in field.elements() {
        let class = field
            .elements()
            .map(|b| field.elements().map(|x| index(x, field.add(field.mul(s, x), b))).collect())
            .collect();
        classes.push(class);
    }
    classes.push(field.elements().map(|c| field.elements().map(|y| index(c, y)).collect()).collect());
    Design::from_classes(q * q, classes)
}

/// The projective plane PG(2,q) (see module docs for the point order).
/// Lines use the same normalised triples as points.
pub fn projective_plane(q: PrimePower) -> Result<Design, ClassicalError> {
    let field = FiniteField::new(q)?;
    let triples = normalized_triples(&field);
    let blocks = triples
        .iter()
        .map(|&(a, b, c)| {
            triples
                .iter()
                .enumerate()
                .filter(|(_, &(x, y, z))| {
                    let s = field.add(field.add(field.mul(a, x), field.mul(b, y)), field.mul(c, z));
                    s == 0
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(Design::new(triples.len(), blocks)?)
}

fn normalized_triples(field: &FiniteField) -> Vec<(Element, Element, Element)> {
    let mut out = vec![(0, 0, 1)];
    out.extend(field.elements().map(|z| (0, 1, z)));
    for y in field.elements() {
        out.extend(field.elements().map(|z| (1, y, z)));
    }
    out
}

/// AG(2,q) with one new point (index `q^2`) added to every line of the
/// slope-0 class: a PBD on `q^2 + 1` points with sigma `q^3 + q^2 + q`.
pub fn augmented_affine_plane(q: PrimePower) -> Result<Design, ClassicalError> {
    let (plane, resolution) = affine_plane(q)?;
    let extra = plane.n();
    let mut blocks = plane.blocks().to_vec();
    for &bi in &resolution.classes[0] {
        blocks[bi].push(extra);
    }
    Ok(Design::new(extra + 1, blocks)?)
}
