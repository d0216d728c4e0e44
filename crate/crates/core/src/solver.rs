//! Exhaustive branch and bound for scp, cp and the PBD minima S(n,m), S'(n,m).
//!
//! The search repeatedly takes the lexicographically smallest uncovered edge
//! and branches over every clique of the residual graph containing it, larger
//! cliques first. The reported witness is the first optimal partition in that
//! order, whatever the thread count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::Design;
use crate::graphs::{max_clique_in, CliquePartition, Graph};

/// Default vertex cap above which a search needs an explicit node budget.
pub const DEFAULT_CAP: usize = 10;

/// Node budget used for graphs above the cap when none is given.
pub const OVER_CAP_BUDGET: u64 = 1_000_000;

/// Hard limit of the bitset representation.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Sigma,
    BlockCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    pub cap: usize,
    pub node_budget: Option<u64>,
    pub threads: usize,
    /// Per-vertex bound `sum ceil(d_x / (s_x - 1))` in place of
    /// `2E / (omega - 1)`. Both are admissible; this one is tighter.
    pub valency_bound: bool,
}

impl Default for SolverLimits {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP, node_budget: None, threads: 1, valency_bound: true }
    }
}

impl SolverLimits {
    fn budget_for(&self, n: usize) -> u64 {
        match self.node_budget {
            Some(b) => b,
            None if n > self.cap => OVER_CAP_BUDGET,
            None => u64::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Partition(CliquePartition),
    Design(Design),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverResult {
    pub optimum: u64,
    pub witness: Witness,
    pub nodes_explored: u64,
    pub proved_optimal: bool,
    pub objective: Objective,
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("node budget of {budget} exhausted before any partition was found")]
    BudgetExhausted { budget: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("{0} vertices exceeds the solver limit of {MAX_VERTICES}")]
    TooLarge(usize),
}

struct Shared {
    global_best: AtomicU64,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

#[derive(Clone)]
struct Params {
    objective: Objective,
    clique_cap: usize,
    /// `min(omega, clique_cap)` of the starting graph.
    omega: usize,
    valency_bound: bool,
}

impl Params {
    fn lower_bound(&self, adj: &[u64]) -> u64 {
        let w = self.omega as u64;
        if w < 2 {
            return 0;
        }
        match self.objective {
            Objective::Sigma if self.valency_bound => adj
                .iter()
                .map(|row| {
                    let d = row.count_ones() as u64;
                    let s = w.min(d + 1);
                    if d == 0 {
                        0
                    } else {
                        d.div_ceil(s - 1)
                    }
                })
                .sum(),
            Objective::Sigma => {
                let e2: u64 = adj.iter().map(|r| r.count_ones() as u64).sum();
                e2.div_ceil(w - 1)
            }
            Objective::BlockCount => {
                let e: u64 = adj.iter().map(|r| r.count_ones() as u64).sum::<u64>() / 2;
                e.div_ceil(w * (w - 1) / 2)
            }
        }
    }

    fn cost(&self, clique: u64) -> u64 {
        match self.objective {
            Objective::Sigma => clique.count_ones() as u64,
            Objective::BlockCount => 1,
        }
    }

    /// Cliques of the residual graph through the smallest uncovered edge,
    /// in branching order; `None` when no edge is left.
    fn branches(&self, adj: &[u64]) -> Option<Vec<u64>> {
        let a = adj.iter().position(|&r| r != 0)?;
        let b = adj[a].trailing_zeros() as usize;
        let base = (1u64 << a) | (1u64 << b);
        let mut out = Vec::new();
        fn extend(adj: &[u64], clique: u64, cand: u64, room: usize, out: &mut Vec<u64>) {
            out.push(clique);
            if room == 0 {
                return;
            }
            let mut c = cand;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                extend(adj, clique | (1u64 << v), c & adj[v], room - 1, out);
            }
        }
        extend(adj, base, adj[a] & adj[b], self.clique_cap.saturating_sub(2), &mut out);
        out.sort_by(|x, y| {
            y.count_ones().cmp(&x.count_ones()).then_with(|| x.reverse_bits().cmp(&y.reverse_bits()).reverse())
        });
        Some(out)
    }
}

fn remove(adj: &mut [u64], clique: u64) {
    let mut c = clique;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        adj[v] &= !clique;
    }
}

fn restore(adj: &mut [u64], clique: u64) {
    let mut c = clique;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        adj[v] |= clique & !(1u64 << v);
    }
}

enum Mode {
    /// Keep the first solution of each strictly better value.
    Optimize,
    /// Keep every solution of exactly this value.
    Collect(u64),
}

struct Branch<'a> {
    params: &'a Params,
    shared: &'a Shared,
    mode: Mode,
    adj: Vec<u64>,
    stack: Vec<u64>,
    cost: u64,
    best: u64,
    found: Vec<Vec<u64>>,
}

impl Branch<'_> {
    fn dfs(&mut self) {
        if !self.shared.tick() {
            return;
        }
        let lb = self.cost + self.params.lower_bound(&self.adj);
        let pruned = match self.mode {
            Mode::Optimize => lb >= self.best || lb > self.shared.global_best.load(Ordering::Relaxed),
            Mode::Collect(target) => lb > target,
        };
        if pruned {
            return;
        }
        let Some(cliques) = self.params.branches(&self.adj) else {
            match self.mode {
                Mode::Optimize => {
                    self.best = self.cost;
                    self.found = vec![self.stack.clone()];
                    self.shared.global_best.fetch_min(self.cost, Ordering::Relaxed);
                }
                Mode::Collect(_) => self.found.push(self.stack.clone()),
            }
            return;
        };
        for c in cliques {
            self.take(c);
            self.dfs();
            self.untake(c);
            if self.shared.exhausted.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn take(&mut self, c: u64) {
        remove(&mut self.adj, c);
        self.stack.push(c);
        self.cost += self.params.cost(c);
    }

    fn untake(&mut self, c: u64) {
        restore(&mut self.adj, c);
        self.stack.pop();
        self.cost -= self.params.cost(c);
    }
}

struct Outcome {
    best: Option<(u64, Vec<u64>)>,
    all: Vec<Vec<u64>>,
    nodes: u64,
    exhausted: bool,
}

fn run(adj: Vec<u64>, params: &Params, limits: &SolverLimits, n: usize, mode: Mode, bound: u64) -> Outcome {
    let shared = Shared {
        global_best: AtomicU64::new(bound),
        nodes: AtomicU64::new(0),
        budget: limits.budget_for(n),
        exhausted: AtomicBool::new(false),
    };
    let collect = matches!(mode, Mode::Collect(_));
    let target = match mode {
        Mode::Collect(t) => t,
        Mode::Optimize => 0,
    };
    let top = params.branches(&adj);
    let branch = |c: Option<u64>| {
        let mut b = Branch {
            params,
            shared: &shared,
            mode: if collect { Mode::Collect(target) } else { Mode::Optimize },
            adj: adj.clone(),
            stack: Vec::new(),
            cost: 0,
            best: bound.saturating_add(1),
            found: Vec::new(),
        };
        match c {
            Some(c) => {
                b.take(c);
                b.dfs();
            }
            None => b.dfs(),
        }
        (b.best, b.found)
    };
    let results: Vec<(u64, Vec<Vec<u64>>)> = match top {
        None => vec![branch(None)],
        Some(top) if limits.threads > 1 => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(limits.threads).build();
            match pool {
                Ok(pool) => pool.install(|| top.par_iter().map(|&c| branch(Some(c))).collect()),
                Err(_) => top.iter().map(|&c| branch(Some(c))).collect(),
            }
        }
        Some(top) => top.iter().map(|&c| branch(Some(c))).collect(),
    };
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut all = Vec::new();
    for (value, mut found) in results {
        if collect {
            all.append(&mut found);
        } else if let Some(w) = found.pop() {
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, w));
            }
        }
    }
    Outcome {
        best,
        all,
        nodes: shared.nodes.load(Ordering::Relaxed).min(shared.budget),
        exhausted: shared.exhausted.load(Ordering::Relaxed),
    }
}

fn masks_to_partition(masks: &[u64], offset: &[usize]) -> CliquePartition {
    CliquePartition::new(
        masks.iter().map(|&m| (0..64).filter(|&i| m >> i & 1 == 1).map(|i| offset[i]).collect()).collect(),
    )
}

/// Optimal clique partition of `g` with cliques of at most `clique_cap`
/// vertices.
fn optimize(
    g: &Graph,
    objective: Objective,
    clique_cap: usize,
    limits: &SolverLimits,
) -> Result<SolverResult, SolverError> {
    let n = g.n();
    let adj = g.adjacency_masks().map_err(|_| SolverError::TooLarge(n))?;
    if clique_cap < 2 && g.edge_count() > 0 {
        return Err(SolverError::Infeasible("cliques must have at least two vertices".into()));
    }
    let all_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let params = Params {
        objective,
        clique_cap,
        omega: max_clique_in(&adj, all_mask).min(clique_cap),
        valency_bound: limits.valency_bound,
    };
    let trivial = CliquePartition::all_edges(g);
    let trivial_value = match objective {
        Objective::Sigma => trivial.sigma(),
        Objective::BlockCount => trivial.len() as u64,
    };
    let out = run(adj, &params, limits, n, Mode::Optimize, trivial_value);
    let labels: Vec<usize> = (0..64).collect();
    let (optimum, witness) = match out.best {
        Some((v, w)) => (v, masks_to_partition(&w, &labels)),
        None if out.exhausted => (trivial_value, trivial),
        None => unreachable!("search completed without reaching the all-edges partition"),
    };
    Ok(SolverResult {
        optimum,
        witness: Witness::Partition(witness),
        nodes_explored: out.nodes,
        proved_optimal: !out.exhausted,
        objective,
        budget: limits.node_budget,
    })
}

/// Minimum total clique size over clique partitions of `g`.
pub fn exact_scp(g: &Graph, limits: &SolverLimits) -> Result<SolverResult, SolverError> {
    optimize(g, Objective::Sigma, usize::MAX, limits)
}

/// Minimum number of cliques in a clique partition of `g`.
pub fn exact_cp(g: &Graph, limits: &SolverLimits) -> Result<SolverResult, SolverError> {
    optimize(g, Objective::BlockCount, usize::MAX, limits)
}

/// `exact_scp` restricted to cliques of at most `clique_cap` vertices.
pub fn exact_scp_capped(g: &Graph, clique_cap: usize, limits: &SolverLimits) -> Result<SolverResult, SolverError> {
    optimize(g, Objective::Sigma, clique_cap, limits)
}

/// Every optimal partition of `g` (cliques of at most `clique_cap`
/// vertices), with the optimum. Errors if the budget runs out.
pub fn all_optimal_partitions(
    g: &Graph,
    clique_cap: usize,
    limits: &SolverLimits,
) -> Result<(u64, Vec<CliquePartition>), SolverError> {
    let first = exact_scp_capped(g, clique_cap, limits)?;
    let budget = limits.budget_for(g.n());
    if !first.proved_optimal {
        return Err(SolverError::BudgetExhausted { budget });
    }
    let adj = g.adjacency_masks().map_err(|_| SolverError::TooLarge(g.n()))?;
    let all_mask = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let params = Params {
        objective: Objective::Sigma,
        clique_cap,
        omega: max_clique_in(&adj, all_mask).min(clique_cap),
        valency_bound: limits.valency_bound,
    };
    let out = run(adj, &params, limits, g.n(), Mode::Collect(first.optimum), first.optimum);
    if out.exhausted {
        return Err(SolverError::BudgetExhausted { budget });
    }
    let labels: Vec<usize> = (0..64).collect();
    let mut all: Vec<_> = out.all.iter().map(|w| masks_to_partition(w, &labels)).collect();
    all.sort_by(|a, b| a.cliques().cmp(b.cliques()));
    Ok((first.optimum, all))
}

fn check_nm(n: usize, m: usize) -> Result<(), SolverError> {
    if m < 2 || m > n {
        return Err(SolverError::Infeasible(format!("no PBD on {n} points has a largest block of size {m}")));
    }
    if n > MAX_VERTICES {
        return Err(SolverError::TooLarge(n));
    }
    Ok(())
}

fn with_block(n: usize, m: usize, r: SolverResult) -> SolverResult {
    let Witness::Partition(p) = r.witness else { unreachable!() };
    let design = crate::graphs::bridge_to_design(n, m, &p).expect("partition of K_n - K_m plus its clique is a PBD");
    SolverResult { optimum: r.optimum + m as u64, witness: Witness::Design(design), ..r }
}

/// Minimum sigma over PBDs on `n` points whose largest block has exactly
/// `m` points (`at_most`: at most `m` points). The size-`m` block is placed
/// on `n-m..n` without loss of generality.
pub fn exact_s(n: usize, m: usize, at_most: bool, limits: &SolverLimits) -> Result<SolverResult, SolverError> {
    check_nm(n, m)?;
    if at_most {
        let r = exact_scp_capped(&Graph::complete_graph(n), m, limits)?;
        let Witness::Partition(p) = r.witness else { unreachable!() };
        let design = Design::new(n, p.into_cliques()).expect("clique partition of K_n is a PBD");
        return Ok(SolverResult { witness: Witness::Design(design), ..r });
    }
    let g = Graph::complete_minus_clique(n, m).expect("m <= n");
    Ok(with_block(n, m, exact_scp_capped(&g, m, limits)?))
}

/// Every PBD attaining `exact_s(n, m, false)` that contains the block
/// `n-m..n`.
pub fn all_optimal_s(n: usize, m: usize, limits: &SolverLimits) -> Result<(u64, Vec<Design>), SolverError> {
    check_nm(n, m)?;
    let g = Graph::complete_minus_clique(n, m).expect("m <= n");
    let (opt, all) = all_optimal_partitions(&g, m, limits)?;
    let designs = all.iter().map(|p| crate::graphs::bridge_to_design(n, m, p).expect("bridge is a PBD")).collect();
    Ok((opt + m as u64, designs))
}

/// Minimum sigma over PBDs on `n` points containing a block of size `m`:
/// `m + scp(K_n - K_m)`.
pub fn exact_s_prime(n: usize, m: usize, limits: &SolverLimits) -> Result<SolverResult, SolverError> {
    check_nm(n, m)?;
    let g = Graph::complete_minus_clique(n, m).expect("m <= n");
    Ok(with_block(n, m, exact_scp(&g, limits)?))
}
