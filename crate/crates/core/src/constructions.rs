//! Explicit PBDs and clique partitions, each wrapped in a certificate that
//! records the bound it meets.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{is_prime, next_prime_at_least, next_prime_power_at_least, AlgebraError, PrimePower};
use crate::bounds::{
    bound_c, large_block_free_value, scp_knkm_bounds, sigma_lower_dbe, BoundSource, BoundValue, BoundsError, Rational,
};
use crate::classical::{
    augmented_affine_plane, projective_plane, proper_edge_coloring_complete, resolvable_design, ClassicalError,
    ResolvableOptions,
};
use crate::design::{validate_pbd, Design};
use crate::graphs::{validate_partition, CliquePartition, Graph};
use crate::validation::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("out of domain: {0}")]
    DomainError(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("block size k = {k} is not supported (only 2 and 3); {guidance}")]
    UnsupportedK { k: usize, guidance: String },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("construction produced an object that fails its certificate: {0}")]
    CertificateFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionTag {
    NearPencil,
    Pbdc,
    AugmentedPlane,
    KnkmTrivial,
    Truncated,
    KnkmPrime,
    KnkmSqrt,
    KnkmResolvable,
    CompPath,
    CompCycle,
    Cocktail,
}

impl ConstructionTag {
    pub const ALL: [ConstructionTag; 11] = [
        ConstructionTag::NearPencil,
        ConstructionTag::Pbdc,
        ConstructionTag::AugmentedPlane,
        ConstructionTag::KnkmTrivial,
        ConstructionTag::Truncated,
        ConstructionTag::KnkmPrime,
        ConstructionTag::KnkmSqrt,
        ConstructionTag::KnkmResolvable,
        ConstructionTag::CompPath,
        ConstructionTag::CompCycle,
        ConstructionTag::Cocktail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionTag::NearPencil => "near-pencil",
            ConstructionTag::Pbdc => "pbdc",
            ConstructionTag::AugmentedPlane => "augmented-plane",
            ConstructionTag::KnkmTrivial => "knkm-trivial",
            ConstructionTag::Truncated => "truncated",
            ConstructionTag::KnkmPrime => "knkm-prime",
            ConstructionTag::KnkmSqrt => "knkm-sqrt",
            ConstructionTag::KnkmResolvable => "knkm-resolvable",
            ConstructionTag::CompPath => "comp-path",
            ConstructionTag::CompCycle => "comp-cycle",
            ConstructionTag::Cocktail => "cocktail",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Achieved sigma equals the claimed value.
    Equality,
    /// Achieved sigma is at most the claimed value.
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructedObject {
    Design(Design),
    Partition { graph: Graph, partition: CliquePartition },
}

impl ConstructedObject {
    pub fn sigma(&self) -> u64 {
        match self {
            ConstructedObject::Design(d) => d.sigma(),
            ConstructedObject::Partition { partition, .. } => partition.sigma(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            ConstructedObject::Design(d) => validate_pbd(d),
            ConstructedObject::Partition { graph, partition } => validate_partition(graph, partition),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionCertificate {
    pub object: ConstructedObject,
    pub claimed: BoundValue,
    pub achieved_sigma: u64,
    pub kind: CertificateKind,
    pub construction: ConstructionTag,
    pub parameters: BTreeMap<String, u64>,
}

impl ConstructionCertificate {
    /// Validates `object` and checks its sigma against `claimed`.
    pub fn issue(
        object: ConstructedObject,
        claimed: BoundValue,
        kind: CertificateKind,
        construction: ConstructionTag,
        parameters: &[(&str, u64)],
    ) -> Result<Self, ConstructionError> {
        let report = object.validate();
        if !report.ok {
            let first = report.violations.first().map(|v| v.to_string()).unwrap_or_default();
            return Err(ConstructionError::CertificateFailed(format!(
                "{construction}: {} violations, first: {first}",
                report.violations.len()
            )));
        }
        let achieved_sigma = object.sigma();
        let achieved = Rational::from_integer(achieved_sigma as i128);
        let holds = match kind {
            CertificateKind::Equality => achieved == claimed.exact,
            CertificateKind::UpperBound => achieved <= claimed.exact,
        };
        if !holds {
            return Err(ConstructionError::CertificateFailed(format!(
                "{construction}: sigma {achieved_sigma} against claimed {} ({kind:?})",
                claimed.exact
            )));
        }
        Ok(Self {
            object,
            claimed,
            achieved_sigma,
            kind,
            construction,
            parameters: parameters.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        })
    }

    pub fn design(&self) -> Option<&Design> {
        match &self.object {
            ConstructedObject::Design(d) => Some(d),
            ConstructedObject::Partition { .. } => None,
        }
    }

    pub fn partition(&self) -> Option<(&Graph, &CliquePartition)> {
        match &self.object {
            ConstructedObject::Partition { graph, partition } => Some((graph, partition)),
            ConstructedObject::Design(_) => None,
        }
    }

    /// Whether the achieved sigma equals the claimed value.
    pub fn is_tight(&self) -> bool {
        Rational::from_integer(self.achieved_sigma as i128) == self.claimed.exact
    }
}

fn domain(msg: String) -> ConstructionError {
    ConstructionError::DomainError(msg)
}

/// One block `0..n-1` and the pairs `{i, n-1}`.
pub fn near_pencil(n: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if n < 3 {
        return Err(domain(format!("near-pencil needs n >= 3, got {n}")));
    }
    let mut blocks = vec![(0..n - 1).collect::<Vec<_>>()];
    blocks.extend((0..n - 1).map(|i| vec![i, n - 1]));
    let design = Design::new(n, blocks).expect("near-pencil blocks are well formed");
    ConstructionCertificate::issue(
        ConstructedObject::Design(design),
        sigma_lower_dbe(n)?,
        CertificateKind::Equality,
        ConstructionTag::NearPencil,
        &[("n", n as u64)],
    )
}

/// PBD on `n` points with a block `0..k` meeting bound C with equality.
/// Colour class `i` of a proper colouring of the complete graph on
/// `k..n` becomes triples through point `i`; leftover pairs are 2-blocks.
pub fn pbdc_equality(n: usize, k: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if k < 2 || k + 1 > n || 2 * k < n {
        return Err(domain(format!("need n/2 <= k <= n - 1 and k >= 2, got n = {n}, k = {k}")));
    }
    let r = n - k;
    let coloring = proper_edge_coloring_complete(r, r)?;
    let mut blocks = vec![(0..k).collect::<Vec<_>>()];
    let mut covered = vec![vec![false; r]; k];
    for (i, class) in coloring.classes.iter().enumerate() {
        for &(a, b) in class {
            blocks.push(vec![i, k + a, k + b]);
            covered[i][a] = true;
            covered[i][b] = true;
        }
    }
    for (x, row) in covered.iter().enumerate() {
        for (a, &c) in row.iter().enumerate() {
            if !c {
                blocks.push(vec![x, k + a]);
            }
        }
    }
    let design = Design::new(n, blocks).expect("pbdc blocks are well formed");
    ConstructionCertificate::issue(
        ConstructedObject::Design(design),
        bound_c(n, k)?,
        CertificateKind::Equality,
        ConstructionTag::Pbdc,
        &[("n", n as u64), ("k", k as u64)],
    )
}

/// AG(2,q) plus a point on every line of one parallel class: no large
/// block, sigma `n(floor(sqrt n) + 1) - 1` with `n = q^2 + 1`.
pub fn augmented_plane_tight(q: u64) -> Result<ConstructionCertificate, ConstructionError> {
    let pp = PrimePower::new(q)?;
    let design = augmented_affine_plane(pp)?;
    let n = design.n();
    ConstructionCertificate::issue(
        ConstructedObject::Design(design),
        BoundValue::new(large_block_free_value(n), BoundSource::LargeBlockFree),
        CertificateKind::Equality,
        ConstructionTag::AugmentedPlane,
        &[("q", q)],
    )
}

/// The clique `0..=n-m` plus every remaining edge as a 2-clique.
pub fn trivial_knkm(n: usize, m: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if m < 2 || m + 1 > n {
        return Err(domain(format!("need 2 <= m <= n - 1, got n = {n}, m = {m}")));
    }
    let graph = Graph::complete_minus_clique(n, m).expect("m <= n");
    let mut cliques = vec![(0..=n - m).collect::<Vec<_>>()];
    for y in n - m + 1..n {
        cliques.extend((0..n - m).map(|x| vec![x, y]));
    }
    ConstructionCertificate::issue(
        ConstructedObject::Partition { graph, partition: CliquePartition::new(cliques) },
        scp_knkm_bounds(n, m)?.upper,
        CertificateKind::Equality,
        ConstructionTag::KnkmTrivial,
        &[("n", n as u64), ("m", m as u64)],
    )
}

/// `K_n - H` where `H` lives on the top `m` vertices and is the complement
/// of the graph covered by `hbar` (local vertices `0..m`).
fn complement_of_local(n: usize, m: usize, hbar: &CliquePartition) -> Result<Graph, ConstructionError> {
    let report = validate_partition(&local_graph(m, hbar)?, hbar);
    if !report.ok {
        return Err(ConstructionError::HypothesisViolated(format!(
            "partition of the complement of H is invalid: {}",
            report.violations[0]
        )));
    }
    if hbar.is_empty() {
        return Ok(Graph::complete_minus_clique(n, m).expect("m <= n"));
    }
    let top = n - m;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let inside_h = a >= top && !hbar.cliques().iter().any(|c| c.contains(&(a - top)) && c.contains(&(b - top)));
            if !inside_h {
                edges.push((a, b));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("edges in range"))
}

fn local_graph(m: usize, hbar: &CliquePartition) -> Result<Graph, ConstructionError> {
    let mut edges = Vec::new();
    for c in hbar.cliques() {
        if c.iter().any(|&x| x >= m) {
            return Err(ConstructionError::HypothesisViolated(format!("complement-of-H clique {c:?} leaves 0..{m}")));
        }
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(m, &edges).map_err(|e| ConstructionError::HypothesisViolated(e.to_string()))
}

/// Truncates a `(v,k,1)`-BIBD to a partition of `K_n - H`: keeps `m` points
/// of the first block (as vertices `n-m..n`) and `n-m` points off it (as
/// `0..n-m`), drops the first block and adds `hbar` on the top vertices.
pub fn truncated_design_partition(
    n: usize,
    m: usize,
    base: &Design,
    hbar: &CliquePartition,
) -> Result<ConstructionCertificate, ConstructionError> {
    let hyp = |s: String| Err(ConstructionError::HypothesisViolated(s));
    if !validate_pbd(base).ok {
        return hyp("base is not a PBD".into());
    }
    let Some(first) = base.blocks().first() else {
        return hyp("base has no blocks".into());
    };
    let (v, k) = (base.n(), first.len());
    if base.blocks().iter().any(|b| b.len() != k) || k < 2 {
        return hyp("base blocks are not all the same size".into());
    }
    if k < m {
        return hyp(format!("block size k = {k} is smaller than m = {m}"));
    }
    if v - k < n - m.min(n) || m > n {
        return hyp(format!("need v - k >= n - m, got v = {v}, k = {k}, n = {n}, m = {m}"));
    }
    let graph = complement_of_local(n, m, hbar)?;
    let mut label = vec![usize::MAX; v];
    for (i, &x) in first.iter().take(m).enumerate() {
        label[x] = n - m + i;
    }
    let mut next = 0;
    for (x, slot) in label.iter_mut().enumerate() {
        if next == n - m {
            break;
        }
        if !first.contains(&x) {
            *slot = next;
            next += 1;
        }
    }
    let mut cliques: Vec<Vec<usize>> = base.blocks()[1..]
        .iter()
        .map(|b| b.iter().filter(|&&x| label[x] != usize::MAX).map(|&x| label[x]).collect::<Vec<_>>())
        .filter(|c| c.len() >= 2)
        .collect();
    cliques.extend(hbar.cliques().iter().map(|c| c.iter().map(|&x| n - m + x).collect()));
    let r = Rational::new((v - 1) as i128, (k - 1) as i128);
    let claimed = Rational::from_integer(n as i128) * r + Rational::from_integer(hbar.sigma() as i128 - m as i128);
    ConstructionCertificate::issue(
        ConstructedObject::Partition { graph, partition: CliquePartition::new(cliques) },
        BoundValue::new(claimed, BoundSource::Construction),
        CertificateKind::UpperBound,
        ConstructionTag::Truncated,
        &[("n", n as u64), ("m", m as u64), ("v", v as u64), ("k", k as u64)],
    )
}

fn plane_truncation(
    n: usize,
    m: usize,
    q: PrimePower,
    hbar: &CliquePartition,
    tag: ConstructionTag,
) -> Result<ConstructionCertificate, ConstructionError> {
    let plane = projective_plane(q)?;
    let mut cert = truncated_design_partition(n, m, &plane, hbar)?;
    let qv = q.order() as i128;
    let claimed = Rational::from_integer(n as i128 * (qv + 1) - m as i128 + hbar.sigma() as i128);
    debug_assert_eq!(claimed, cert.claimed.exact);
    cert.claimed = BoundValue::new(claimed, BoundSource::Construction);
    cert.construction = tag;
    cert.parameters =
        [("n", n as u64), ("m", m as u64), ("q", q.order())].iter().map(|&(k, v)| (k.to_string(), v)).collect();
    Ok(cert)
}

/// Partition of `K_n - K_m` from PG(2,q) with `q` the least prime power
/// `>= m` (raised until `q^2 >= n - m`): sigma at most `n(q+1) - m`.
/// Accepts `m >= floor(sqrt n)`.
pub fn scp_upper_prime(n: usize, m: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if m < 2 || m > n || m < n.isqrt() {
        return Err(domain(format!("need floor(sqrt n) <= m <= n and m >= 2, got n = {n}, m = {m}")));
    }
    let mut q = next_prime_power_at_least(m as u64)?;
    while q.order() * q.order() < (n - m) as u64 {
        q = next_prime_power_at_least(q.order() + 1)?;
    }
    plane_truncation(n, m, q, &CliquePartition::default(), ConstructionTag::KnkmPrime)
}

/// Partition of `K_n - H` for `sqrt(n)/2 <= m <= sqrt(n)` from PG(2,q) with
/// `q` the least prime power `>= sqrt n` (raised until `q >= m - 1` and
/// `q^2 >= n - m`): sigma at most `n(q+1) - m + sigma(hbar)`.
pub fn scp_upper_sqrt(
    n: usize,
    m: usize,
    hbar: &CliquePartition,
) -> Result<ConstructionCertificate, ConstructionError> {
    if m < 1 || 4 * m * m < n || m * m > n {
        return Err(domain(format!("need sqrt(n)/2 <= m <= sqrt(n), got n = {n}, m = {m}")));
    }
    let mut q = next_prime_power_at_least(n.isqrt() as u64)?;
    let ok = |q: u64| q * q >= n as u64 && q + 1 >= m as u64 && q * q >= (n - m) as u64;
    while !ok(q.order()) {
        q = next_prime_power_at_least(q.order() + 1)?;
    }
    plane_truncation(n, m, q, hbar, ConstructionTag::KnkmSqrt)
}

/// Smallest `v >= lo` admitting a resolvable `(v,k,1)` design by the
/// divisibility conditions.
pub fn admissible_resolvable_order(lo: usize, k: usize) -> usize {
    (lo.max(k)..).find(|&v| v % k == 0 && (v - 1) % (k - 1) == 0).expect("unbounded search")
}

/// Partition of `K_n - K_m` for `m < n/2` from a resolvable design with
/// block size `k = floor(n/m)`: the `i`-th new vertex joins every block of
/// the `i`-th parallel class.
pub fn resolvable_cn_partition(n: usize, m: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if m == 0 || 2 * m >= n {
        return Err(domain(format!("need 0 < m < n/2, got n = {n}, m = {m}")));
    }
    let k = n / m;
    if k != 2 && k != 3 {
        let guidance =
            if k > 3 { format!("choose m > n/4 (m >= {}) so that floor(n/m) <= 3", n / 4 + 1) } else { String::new() };
        return Err(ConstructionError::UnsupportedK { k, guidance });
    }
    let base = n - m;
    let v = admissible_resolvable_order(base, k);
    let t = (v - 1) / (k - 1);
    if t < m {
        return Err(ConstructionError::HypothesisViolated(format!(
            "only t = {t} parallel classes for m = {m} new points (v = {v}, k = {k})"
        )));
    }
    let (design, resolution) = resolvable_design(v, k, ResolvableOptions::default())?;
    let mut cliques = Vec::new();
    for (i, class) in resolution.classes.iter().enumerate() {
        for &bi in class {
            let mut c: Vec<usize> = design.blocks()[bi].iter().copied().filter(|&x| x < base).collect();
            if i < m && !c.is_empty() {
                c.push(base + i);
            }
            if c.len() >= 2 {
                cliques.push(c);
            }
        }
    }
    let graph = Graph::complete_minus_clique(n, m).expect("m <= n");
    let claimed = Rational::new((base * (v - 1)) as i128, (k - 1) as i128) + Rational::new((m * v) as i128, k as i128);
    ConstructionCertificate::issue(
        ConstructedObject::Partition { graph, partition: CliquePartition::new(cliques) },
        BoundValue::new(claimed, BoundSource::Construction),
        CertificateKind::UpperBound,
        ConstructionTag::KnkmResolvable,
        &[("n", n as u64), ("m", m as u64), ("k", k as u64), ("v", v as u64)],
    )
}

/// Optimal partitions of the complement of `P_n` for `n <= 10`, as found by
/// the exact solver.
const PATH_BASE: [&[&[usize]]; 11] = [
    &[],
    &[],
    &[],
    &[&[0, 2]],
    &[&[0, 2], &[0, 3], &[1, 3]],
    &[&[0, 2, 4], &[0, 3], &[1, 3], &[1, 4]],
    &[&[0, 2, 4], &[0, 3, 5], &[1, 3], &[1, 4], &[1, 5], &[2, 5]],
    &[&[0, 2, 4, 6], &[0, 3, 5], &[1, 3, 6], &[1, 4], &[1, 5], &[2, 5]],
    &[&[0, 2, 4, 6], &[0, 3, 5, 7], &[1, 3, 6], &[1, 4, 7], &[1, 5], &[2, 5], &[2, 7]],
    &[&[0, 2, 4, 6, 8], &[0, 3, 5, 7], &[1, 3, 6], &[1, 4, 7], &[1, 5, 8], &[2, 5], &[2, 7], &[3, 8]],
    &[&[0, 2, 4, 6, 8], &[0, 3, 7], &[0, 5, 9], &[1, 3, 5, 8], &[1, 4, 7, 9], &[1, 6], &[2, 5, 7], &[2, 9], &[3, 6, 9]],
];

/// Largest `n` served from [`PATH_BASE`].
pub const PATH_BASE_MAX: usize = 10;

/// Grid shape and field order used by the path recursion at `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathGrid {
    pub d: usize,
    pub e: usize,
    pub q: usize,
}

pub fn path_grid(n: usize) -> PathGrid {
    let d = n.isqrt();
    let e = n.div_ceil(d);
    let mut q = next_prime_at_least(n.isqrt() as u64).expect("small") as usize;
    while q * q < n || q < e {
        q = next_prime_at_least(q as u64 + 1).expect("small") as usize;
    }
    debug_assert!(is_prime(q as u64));
    PathGrid { d, e, q }
}

/// Partition of the complement of `P_n` plus the recursion's accounting
/// bound (every line counted at full grid size).
fn path_partition(n: usize) -> (Vec<Vec<usize>>, u64) {
    if n <= PATH_BASE_MAX {
        let cliques: Vec<Vec<usize>> = PATH_BASE[n].iter().map(|c| c.to_vec()).collect();
        let sigma = cliques.iter().map(|c| c.len() as u64).sum();
        return (cliques, sigma);
    }
    let PathGrid { d, e, q } = path_grid(n);
    // grid point (row i, column j) sits at path position j*d + i on even
    // columns and j*d + d-1-i on odd ones
    let pos = |i: usize, j: usize| j * d + if j.is_multiple_of(2) { i } else { d - 1 - i };
    let mut cliques = Vec::new();
    let (col, col_bound) = path_partition(d);
    let (row, row_bound) = path_partition(e);
    for j in 0..e {
        cliques.extend(col.iter().map(|c| c.iter().map(|&t| j * d + t).collect()));
    }
    for i in 0..d {
        if i == 0 || i == d - 1 {
            cliques.extend(row.iter().map(|c| c.iter().map(|&j| pos(i, j)).collect()));
        } else {
            cliques.push((0..e).map(|j| pos(i, j)).collect());
        }
    }
    // consecutive row pairs that are not turns of the path
    for j in 0..e - 1 {
        let i = if j % 2 == 0 { 0 } else { d - 1 };
        cliques.push(vec![pos(i, j), pos(i, j + 1)]);
    }
    for s in 1..q {
        for b in 0..q {
            let line: Vec<usize> = (0..e)
                .filter_map(|x| {
                    let y = (s * x + b) % q;
                    (y < d).then(|| pos(y, x))
                })
                .collect();
            if line.len() >= 2 {
                cliques.push(line);
            }
        }
    }
    let bound = ((q - 1) * d * e + (d - 2) * e + 2 * (e - 1)) as u64 + e as u64 * col_bound + 2 * row_bound;
    let grid = CliquePartition::new(cliques);
    let tail: Vec<usize> = (n..d * e).collect();
    (grid.delete_points(d * e, &tail).into_cliques(), bound)
}

/// Partition of the complement of the path `0-1-...-(n-1)`: exact for
/// `n <= 10`, otherwise a grid in AG(2,q) with recursive rows and columns.
pub fn complement_path_partition(n: usize) -> Result<ConstructionCertificate, ConstructionError> {
    let graph = Graph::complement_path(n).map_err(|e| domain(e.to_string()))?;
    let (cliques, bound) = path_partition(n);
    let kind = if n <= PATH_BASE_MAX { CertificateKind::Equality } else { CertificateKind::UpperBound };
    let mut params = vec![("n", n as u64)];
    if n > PATH_BASE_MAX {
        let g = path_grid(n);
        params.extend([("d", g.d as u64), ("e", g.e as u64), ("q", g.q as u64)]);
    }
    ConstructionCertificate::issue(
        ConstructedObject::Partition { graph, partition: CliquePartition::new(cliques) },
        BoundValue::integer(bound as i128, BoundSource::Construction),
        kind,
        ConstructionTag::CompPath,
        &params,
    )
}

/// `(sigma - n^{3/2}) / n^{13/10}`, the constant a path partition would
/// need in `sigma <= n^{3/2} + c n^{13/10}`.
pub fn path_constant(n: usize, sigma: u64) -> f64 {
    let n = n as f64;
    (sigma as f64 - n.powf(1.5)) / n.powf(1.3)
}

/// Complement of `C_n`: the path partition on `0..n-1` plus `{n-1, u}` for
/// every `u` other than `0` and `n-2`.
pub fn complement_cycle_partition(n: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if n < 4 {
        return Err(domain(format!("need n >= 4, got {n}")));
    }
    let (mut cliques, _) = path_partition(n - 1);
    let base: u64 = cliques.iter().map(|c| c.len() as u64).sum();
    cliques.extend((1..n - 2).map(|u| vec![u, n - 1]));
    let graph = Graph::complement_cycle(n).expect("n >= 4");
    ConstructionCertificate::issue(
        ConstructedObject::Partition { graph, partition: CliquePartition::new(cliques) },
        BoundValue::integer((base + 2 * (n as u64 - 3)) as i128, BoundSource::Construction),
        CertificateKind::Equality,
        ConstructionTag::CompCycle,
        &[("n", n as u64)],
    )
}

/// Cocktail party graph: the path partition plus the path edges `{i, i+1}`
/// with `i` odd, which the matching does not remove.
pub fn cocktail_party_partition(n: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if n < 2 {
        return Err(domain(format!("need n >= 2, got {n}")));
    }
    let (mut cliques, _) = path_partition(n);
    let base: u64 = cliques.iter().map(|c| c.len() as u64).sum();
    let extra: Vec<Vec<usize>> = (1..n.saturating_sub(1)).step_by(2).map(|i| vec![i, i + 1]).collect();
    let added = 2 * extra.len() as u64;
    cliques.extend(extra);
    let graph = Graph::cocktail_party(n).expect("n >= 2");
    ConstructionCertificate::issue(
        ConstructedObject::Partition { graph, partition: CliquePartition::new(cliques) },
        BoundValue::integer((base + added) as i128, BoundSource::Construction),
        CertificateKind::Equality,
        ConstructionTag::Cocktail,
        &[("n", n as u64)],
    )
}

/// Rebuilds a certificate from its tag and parameters.
pub fn rebuild(
    tag: ConstructionTag,
    params: &BTreeMap<String, u64>,
) -> Result<ConstructionCertificate, ConstructionError> {
    let get =
        |k: &str| params.get(k).map(|&v| v as usize).ok_or_else(|| domain(format!("parameter {k} missing for {tag}")));
    match tag {
        ConstructionTag::NearPencil => near_pencil(get("n")?),
        ConstructionTag::Pbdc => pbdc_equality(get("n")?, get("k")?),
        ConstructionTag::AugmentedPlane => augmented_plane_tight(get("q")? as u64),
        ConstructionTag::KnkmTrivial => trivial_knkm(get("n")?, get("m")?),
        ConstructionTag::KnkmPrime => scp_upper_prime(get("n")?, get("m")?),
        ConstructionTag::KnkmSqrt => scp_upper_sqrt(get("n")?, get("m")?, &CliquePartition::default()),
        ConstructionTag::KnkmResolvable => resolvable_cn_partition(get("n")?, get("m")?),
        ConstructionTag::CompPath => complement_path_partition(get("n")?),
        ConstructionTag::CompCycle => complement_cycle_partition(get("n")?),
        ConstructionTag::Cocktail => cocktail_party_partition(get("n")?),
        ConstructionTag::Truncated => {
            Err(domain("truncated partitions depend on a base design; rebuild is not supported".into()))
        }
    }
}
