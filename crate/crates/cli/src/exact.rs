use anyhow::{anyhow, bail, Result};
use pbd_core::solver::{exact_cp, exact_s, exact_s_prime, exact_scp, DEFAULT_CAP, OVER_CAP_BUDGET};
use pbd_core::{Document, Graph, Objective, SolverLimits, Witness};

use crate::{ExactArgs, FamilyArg, ObjectiveArg, Outcome};

const PRINTED_WITNESS_LIMIT: usize = 40;

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| anyhow!("--{name} is required here"))
}

fn graph_for(args: &ExactArgs) -> Result<Graph> {
    if let Some(path) = &args.graph {
        return Ok(match Document::read(path)? {
            Document::Partition(f) => f.graph.to_graph()?,
            Document::Design(f) => Graph::complete_graph(f.n),
            Document::EdgeColoring(f) => Graph::complete_graph(f.v),
        });
    }
    let family = args.family.ok_or_else(|| anyhow!("scp and cp need --family or --graph"))?;
    let n = need(args.n, "n")?;
    Ok(match family {
        FamilyArg::Knkm => Graph::complete_minus_clique(n, need(args.m, "m")?)?,
        FamilyArg::Complete => Graph::complete_graph(n),
        FamilyArg::CompPath => Graph::complement_path(n)?,
        FamilyArg::CompCycle => Graph::complement_cycle(n)?,
        FamilyArg::Cocktail => Graph::cocktail_party(n)?,
    })
}

pub fn run(args: &ExactArgs) -> Result<Outcome> {
    if args.threads == 0 {
        bail!("--threads must be at least 1");
    }
    let limits = SolverLimits {
        cap: args.cap.unwrap_or(DEFAULT_CAP),
        node_budget: args.budget,
        threads: args.threads,
        ..SolverLimits::default()
    };
    let (label, graph, result, n) = match args.objective {
        ObjectiveArg::Scp | ObjectiveArg::Cp => {
            let g = graph_for(args)?;
            let r = if args.objective == ObjectiveArg::Scp { exact_scp(&g, &limits)? } else { exact_cp(&g, &limits)? };
            let name = if args.objective == ObjectiveArg::Scp { "scp" } else { "cp" };
            let n = g.n();
            (format!("{name}({})", g.family()), Some(g), r, n)
        }
        ObjectiveArg::S => {
            let (n, m) = (need(args.n, "n")?, need(args.m, "m")?);
            let bound = if args.at_most { "at most" } else { "exactly" };
            let r = exact_s(n, m, args.at_most, &limits)?;
            (format!("S({n}, {m}): min sigma, largest block {bound} {m}"), None, r, n)
        }
        ObjectiveArg::Sprime => {
            let (n, m) = (need(args.n, "n")?, need(args.m, "m")?);
            let r = exact_s_prime(n, m, &limits)?;
            (format!("S'({n}, {m}): min sigma with a block of size {m}"), None, r, n)
        }
    };
    let unit = match result.objective {
        Objective::Sigma => "sigma",
        Objective::BlockCount => "cliques",
    };
    println!("{label}");
    match limits.node_budget.or((n > limits.cap).then_some(OVER_CAP_BUDGET)) {
        Some(b) => println!("node budget: {b}"),
        None => println!("node budget: none (n = {n} within cap {})", limits.cap),
    }
    if result.proved_optimal {
        println!("optimum: {} ({unit})", result.optimum);
    } else {
        println!("best found: {} ({unit})", result.optimum);
    }
    println!("proved optimal: {}", if result.proved_optimal { "yes" } else { "no" });
    println!("nodes explored: {}", result.nodes_explored);
    let blocks = match &result.witness {
        Witness::Partition(p) => p.cliques().to_vec(),
        Witness::Design(d) => d.blocks().to_vec(),
    };
    if let Some(out) = &args.out {
        Document::solver_result(&result, graph.as_ref()).write(out)?;
        println!("witness: {}", out.display());
    } else if blocks.len() <= PRINTED_WITNESS_LIMIT {
        let shown: Vec<String> =
            blocks.iter().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        println!("witness: {{{}}}", shown.join("} {"));
    } else {
        println!("witness: {} blocks (use --out to save)", blocks.len());
    }
    if !result.proved_optimal {
        eprintln!("search stopped at the node budget; raise --budget or --cap to prove optimality");
        return Ok(Outcome::Budget);
    }
    Ok(Outcome::Ok)
}
