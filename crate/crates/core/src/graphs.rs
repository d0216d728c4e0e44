//! Graphs of the form `K_n - H` and clique partitions over them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::Design;
use crate::validation::{structural_problem, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("out of domain: {0}")]
    DomainError(String),
    #[error("closed-form clique number is only known for the named families")]
    ExplicitFamilyUnsupported,
    #[error("edge ({0}, {1}) is a loop or out of range")]
    BadEdge(usize, usize),
    #[error("brute-force clique search is limited to 64 vertices, got {0}")]
    TooLarge(usize),
}

/// Where a graph came from. Named families fix vertex placement: the removed
/// clique sits on the top indices and the removed path runs `0-1-...-(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphFamily {
    CompleteMinusClique { n: usize, m: usize },
    ComplementPath { n: usize },
    ComplementCycle { n: usize },
    CocktailParty { n: usize },
    Explicit,
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::CompleteMinusClique { n, m } => write!(f, "K_{n} - K_{m}"),
            GraphFamily::ComplementPath { n } => write!(f, "complement of P_{n}"),
            GraphFamily::ComplementCycle { n } => write!(f, "complement of C_{n}"),
            GraphFamily::CocktailParty { n } => write!(f, "T_{n}"),
            GraphFamily::Explicit => f.write_str("explicit graph"),
        }
    }
}

/// Simple undirected graph on `0..n` with bitset rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    family: GraphFamily,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("family", &self.family)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    fn empty(n: usize, family: GraphFamily) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, rows: vec![0; n * words], family }
    }

    fn complete(n: usize, family: GraphFamily) -> Self {
        let mut g = Self::empty(n, family);
        for a in 0..n {
            for b in a + 1..n {
                g.set(a, b, true);
            }
        }
        g
    }

    fn set(&mut self, a: usize, b: usize, on: bool) {
        let w = self.words;
        for (x, y) in [(a, b), (b, a)] {
            let word = &mut self.rows[x * w + y / 64];
            if on {
                *word |= 1 << (y % 64);
            } else {
                *word &= !(1 << (y % 64));
            }
        }
    }

    /// `K_n` with the edges among `n-m..n` removed.
    pub fn complete_minus_clique(n: usize, m: usize) -> Result<Self, GraphError> {
        if m > n {
            return Err(GraphError::DomainError(format!("m = {m} > n = {n}")));
        }
        let mut g = Self::complete(n, GraphFamily::CompleteMinusClique { n, m });
        for a in n - m..n {
            for b in a + 1..n {
                g.set(a, b, false);
            }
        }
        Ok(g)
    }

    pub fn complete_graph(n: usize) -> Self {
        Self::complete(n, GraphFamily::CompleteMinusClique { n, m: 0 })
    }

    pub fn complement_path(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::DomainError(format!("path needs n >= 2, got {n}")));
        }
        let mut g = Self::complete(n, GraphFamily::ComplementPath { n });
        for i in 0..n - 1 {
            g.set(i, i + 1, false);
        }
        Ok(g)
    }

    pub fn complement_cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::DomainError(format!("cycle needs n >= 3, got {n}")));
        }
        let mut g = Self::complete(n, GraphFamily::ComplementCycle { n });
        for i in 0..n {
            g.set(i, (i + 1) % n, false);
        }
        Ok(g)
    }

    /// `K_n` minus the matching `{2i, 2i+1}`; for odd `n`, `T_{n+1}` with
    /// vertex `n` deleted.
    pub fn cocktail_party(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::DomainError(format!("cocktail party needs n >= 2, got {n}")));
        }
        let mut g = Self::complete(n, GraphFamily::CocktailParty { n });
        for i in (0..n.saturating_sub(1)).step_by(2) {
            g.set(i, i + 1, false);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n, GraphFamily::Explicit);
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(GraphError::BadEdge(a, b));
            }
            g.set(a, b, true);
        }
        Ok(g)
    }

    /// Rebuilds a named family from its tag.
    pub fn from_family(family: GraphFamily) -> Result<Self, GraphError> {
        match family {
            GraphFamily::CompleteMinusClique { n, m } => Self::complete_minus_clique(n, m),
            GraphFamily::ComplementPath { n } => Self::complement_path(n),
            GraphFamily::ComplementCycle { n } => Self::complement_cycle(n),
            GraphFamily::CocktailParty { n } => Self::cocktail_party(n),
            GraphFamily::Explicit => Err(GraphError::ExplicitFamilyUnsupported),
        }
    }

    /// The same edge set, tagged as explicit.
    pub fn into_explicit(mut self) -> Self {
        self.family = GraphFamily::Explicit;
        self
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::complete(self.n, GraphFamily::Explicit);
        for (a, b) in self.edges() {
            g.set(a, b, false);
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::empty(vertices.len(), GraphFamily::Explicit);
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set(i, j, true);
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.rows[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn degree(&self, a: usize) -> usize {
        self.row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (a + 1..self.n).filter(move |&b| self.has_edge(a, b)).map(move |b| (a, b)))
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.rows[a * self.words..(a + 1) * self.words]
    }

    /// Adjacency rows as single words; only for graphs on at most 64 vertices.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>, GraphError> {
        if self.n > 64 {
            return Err(GraphError::TooLarge(self.n));
        }
        Ok((0..self.n).map(|a| self.rows[a * self.words]).collect())
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }
}

/// Clique number from the family formula.
pub fn clique_number_closed_form(g: &Graph) -> Result<usize, GraphError> {
    let omega = match g.family() {
        GraphFamily::CompleteMinusClique { n, m } => {
            if m == 0 {
                n
            } else {
                n - m + 1
            }
        }
        GraphFamily::ComplementPath { n } | GraphFamily::CocktailParty { n } => n.div_ceil(2),
        GraphFamily::ComplementCycle { n } => n / 2,
        GraphFamily::Explicit => return Err(GraphError::ExplicitFamilyUnsupported),
    };
    Ok(omega.min(g.n()))
}

/// Exhaustive maximum clique size for graphs on at most 64 vertices.
pub fn max_clique_size(g: &Graph) -> Result<usize, GraphError> {
    let adj = g.adjacency_masks()?;
    Ok(max_clique_in(&adj, if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 }))
}

/// Largest clique inside the vertex set `candidates` of the graph `adj`.
pub(crate) fn max_clique_in(adj: &[u64], candidates: u64) -> usize {
    fn grow(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            grow(adj, size + 1, cand & adj[v], best);
        }
        *best = (*best).max(size);
    }
    let mut best = 0;
    grow(adj, 0, candidates, &mut best);
    best
}

/// A family of cliques, kept sorted: each clique increasing, cliques in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CliquePartition {
    cliques: Vec<Vec<usize>>,
}

impl CliquePartition {
    pub fn new(mut cliques: Vec<Vec<usize>>) -> Self {
        for c in &mut cliques {
            c.sort_unstable();
        }
        cliques.sort();
        Self { cliques }
    }

    /// Every edge of `g` as its own clique.
    pub fn all_edges(g: &Graph) -> Self {
        Self::new(g.edges().map(|(a, b)| vec![a, b]).collect())
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn into_cliques(self) -> Vec<Vec<usize>> {
        self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn sigma(&self) -> u64 {
        partition_sigma(self)
    }

    /// Number of cliques through each of `0..n`.
    pub fn valencies(&self, n: usize) -> Vec<u64> {
        let mut r = vec![0u64; n];
        for c in &self.cliques {
            for &x in c {
                if x < n {
                    r[x] += 1;
                }
            }
        }
        r
    }

    /// Deletes `points` from every clique, drops remnants of size at most one
    /// and relabels the survivors `0..` in increasing order.
    pub fn delete_points(&self, n: usize, points: &[usize]) -> Self {
        let mut gone = vec![false; n];
        for &p in points {
            if p < n {
                gone[p] = true;
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if !gone[x] {
                label[x] = next;
                next += 1;
            }
        }
        Self::new(
            self.cliques
                .iter()
                .map(|c| c.iter().filter(|&&x| !gone[x]).map(|&x| label[x]).collect::<Vec<_>>())
                .filter(|c| c.len() >= 2)
                .collect(),
        )
    }

    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.cliques {
            *h.entry(c.len()).or_insert(0) += 1;
        }
        h
    }
}

pub fn partition_sigma(p: &CliquePartition) -> u64 {
    p.cliques.iter().map(|c| c.len() as u64).sum()
}

/// Checks that every clique is a clique of `g` and that every edge of `g`
/// is covered exactly once.
pub fn validate_partition(g: &Graph, p: &CliquePartition) -> ValidationReport {
    let n = g.n();
    let mut violations = Vec::new();
    let mut counts = crate::validation::PairCounter::new(n);
    for c in p.cliques() {
        if let Some(detail) = structural_problem(n, c) {
            violations.push(Violation { kind: ViolationKind::StructuralViolation, items: c.clone(), detail });
            continue;
        }
        if c.len() < 2 {
            violations.push(Violation {
                kind: ViolationKind::StructuralViolation,
                items: c.clone(),
                detail: "cliques need at least two vertices".into(),
            });
            continue;
        }
        let missing: Vec<_> = c
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| c[i + 1..].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(a, b))
            .collect();
        if let Some(&(a, b)) = missing.first() {
            violations.push(Violation {
                kind: ViolationKind::NonCliqueBlock,
                items: c.clone(),
                detail: format!("{a} and {b} are not adjacent"),
            });
        }
        counts.bump_block(c);
    }
    for (a, b) in g.edges() {
        match counts.get(a, b) {
            0 => violations.push(Violation {
                kind: ViolationKind::EdgeUncovered,
                items: vec![a, b],
                detail: String::new(),
            }),
            1 => {}
            k => violations.push(Violation {
                kind: ViolationKind::EdgeDuplicated,
                items: vec![a, b],
                detail: format!("covered {k} times"),
            }),
        }
    }
    ValidationReport::from_violations(violations)
}

/// A partition of `K_n - K_m` plus the removed clique on `n-m..n`.
pub fn bridge_to_design(n: usize, m: usize, p: &CliquePartition) -> Option<Design> {
    let mut blocks = p.cliques().to_vec();
    if m >= 2 {
        blocks.push((n - m..n).collect());
    }
    Design::new(n, blocks).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate_pbd;

    fn brute_clique_number(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|&s| {
                let vs: Vec<_> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
                g.is_clique(&vs)
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn family_edge_counts() {
        assert_eq!(Graph::complete_minus_clique(4, 2).unwrap().edge_count(), 5);
        assert_eq!(Graph::complete_minus_clique(6, 3).unwrap().edge_count(), 12);
        assert_eq!(Graph::complete_minus_clique(5, 1).unwrap().edge_count(), 10);
        assert_eq!(Graph::complete_minus_clique(5, 0).unwrap().edge_count(), 10);
        let p = Graph::complement_path(4).unwrap();
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(Graph::complement_cycle(5).unwrap().edge_count(), 5);
        assert_eq!(Graph::cocktail_party(6).unwrap().edge_count(), 12);
        let t5 = Graph::cocktail_party(5).unwrap();
        assert_eq!(t5.edge_count(), 8);
        let t6 = Graph::cocktail_party(6).unwrap();
        assert_eq!(t5.edges().collect::<Vec<_>>(), t6.induced(&[0, 1, 2, 3, 4]).edges().collect::<Vec<_>>());
        for n in 3..40 {
            let c2 = n * (n - 1) / 2;
            assert_eq!(Graph::complement_path(n).unwrap().edge_count(), c2 - (n - 1));
            assert_eq!(Graph::complement_cycle(n).unwrap().edge_count(), c2 - n);
            assert_eq!(Graph::cocktail_party(n).unwrap().edge_count(), c2 - n / 2);
            for m in 0..=n {
                assert_eq!(Graph::complete_minus_clique(n, m).unwrap().edge_count(), c2 - m * (m.max(1) - 1) / 2);
            }
        }
        assert!(Graph::complement_cycle(2).is_err());
        assert!(Graph::complete_minus_clique(3, 4).is_err());
    }

    #[test]
    fn large_graphs_span_words() {
        let g = Graph::complement_path(200).unwrap();
        assert!(g.has_edge(0, 199) && !g.has_edge(63, 64) && g.has_edge(63, 65));
        assert_eq!(g.edge_count(), 200 * 199 / 2 - 199);
    }

    #[test]
    fn closed_form_clique_numbers() {
        assert_eq!(clique_number_closed_form(&Graph::complete_minus_clique(6, 3).unwrap()), Ok(4));
        assert_eq!(clique_number_closed_form(&Graph::complement_path(6).unwrap()), Ok(3));
        assert_eq!(clique_number_closed_form(&Graph::complement_cycle(6).unwrap()), Ok(3));
        assert_eq!(
            clique_number_closed_form(&Graph::from_edges(3, &[(0, 1)]).unwrap()),
            Err(GraphError::ExplicitFamilyUnsupported)
        );
        for n in 2..=12 {
            let mut graphs = vec![Graph::complement_path(n).unwrap(), Graph::cocktail_party(n).unwrap()];
            if n >= 3 {
                graphs.push(Graph::complement_cycle(n).unwrap());
            }
            for m in 0..=n {
                graphs.push(Graph::complete_minus_clique(n, m).unwrap());
            }
            for g in graphs {
                let brute = brute_clique_number(&g);
                assert_eq!(clique_number_closed_form(&g).unwrap(), brute, "{}", g.family());
                assert_eq!(max_clique_size(&g).unwrap(), brute);
            }
        }
    }

    #[test]
    fn partition_validation() {
        let g = Graph::complete_minus_clique(4, 2).unwrap();
        // x = 0, 1 adjacent here; the removed pair is {2, 3}
        let ok = CliquePartition::new(vec![vec![0, 1, 2], vec![0, 3], vec![1, 3]]);
        let report = validate_partition(&g, &ok);
        assert!(report.ok, "{:?}", report.violations);
        assert_eq!(partition_sigma(&ok), 7);
        let dup = CliquePartition::new(vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![0, 1]]);
        assert_eq!(validate_partition(&g, &dup).count(ViolationKind::EdgeDuplicated), 1);
        let bad = CliquePartition::new(vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(validate_partition(&g, &bad).count(ViolationKind::NonCliqueBlock), 1);
        let short = CliquePartition::new(vec![vec![0, 1, 2], vec![0, 3]]);
        assert_eq!(validate_partition(&g, &short).count(ViolationKind::EdgeUncovered), 1);
        let tiny = CliquePartition::new(vec![vec![0]]);
        assert_eq!(validate_partition(&g, &tiny).count(ViolationKind::StructuralViolation), 1);
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert!(validate_partition(&empty, &CliquePartition::default()).ok);
        assert_eq!(partition_sigma(&CliquePartition::all_edges(&g)), 10);
    }

    #[test]
    fn bridge_gives_pbd() {
        let p = CliquePartition::new(vec![vec![0, 1, 2], vec![0, 3], vec![1, 3]]);
        let d = bridge_to_design(4, 2, &p).unwrap();
        assert!(validate_pbd(&d).ok);
        assert_eq!(d.sigma(), 9);
    }

    #[test]
    fn delete_points_relabels() {
        let p = CliquePartition::new(vec![vec![0, 2, 4], vec![1, 3]]);
        assert_eq!(p.delete_points(5, &[3]).cliques(), &[vec![0, 2, 3]]);
    }
}
