use anyhow::{bail, Result};
use pbd_core::bounds::{
    bound_a, bound_b, bound_c, knkm_small_m_lower, large_block_free_applies, large_block_free_lower, max_valency_lower,
    scp_complement_lower, scp_knkm_bounds, scp_knkm_halfcase_exact, sigma_lower_dbe,
};
use pbd_core::design::{validate_blocks, verify_resolution};
use pbd_core::graphs::clique_number_closed_form;
use pbd_core::io::IoError;
use pbd_core::{
    validate_partition, BoundValue, CliquePartition, Design, Document, Graph, GraphFamily, Rational, ValidationReport,
};

use crate::report::{bound, count_values, histogram};
use crate::{Outcome, ReadAs, VerifyArgs};

const SHOWN_VIOLATIONS: usize = 25;

enum Target {
    Pbd { n: usize, blocks: Vec<Vec<usize>>, resolution: Option<Vec<Vec<usize>>> },
    Partition { graph: Graph, partition: CliquePartition },
}

pub fn run(args: &VerifyArgs) -> Result<Outcome> {
    let doc = match Document::read(&args.file) {
        Ok(doc) => doc,
        Err(e @ IoError::File { .. }) => return Err(e.into()),
        Err(e) => {
            eprintln!("{}: {e}", args.file.display());
            return Ok(Outcome::Invalid);
        }
    };
    let target = match (doc, args.read_as) {
        (Document::Design(f), None | Some(ReadAs::Pbd)) => {
            Target::Pbd { n: f.n, blocks: f.blocks, resolution: f.resolution }
        }
        (Document::Design(f), Some(ReadAs::Partition)) => {
            Target::Partition { graph: Graph::complete_graph(f.n), partition: CliquePartition::new(f.blocks) }
        }
        (Document::Partition(f), read_as) => {
            let graph = match f.graph.to_graph() {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("{}: {e}", args.file.display());
                    return Ok(Outcome::Invalid);
                }
            };
            if read_as == Some(ReadAs::Pbd) {
                Target::Pbd { n: graph.n(), blocks: f.cliques, resolution: None }
            } else {
                Target::Partition { graph, partition: CliquePartition::new(f.cliques) }
            }
        }
        (Document::EdgeColoring(f), None) => {
            let coloring = f.to_coloring();
            println!("edge colouring of K_{} with {} classes", coloring.v, coloring.classes.len());
            if coloring.is_valid() {
                println!("valid: yes");
                return Ok(Outcome::Ok);
            }
            println!("valid: no");
            return Ok(Outcome::Invalid);
        }
        (Document::EdgeColoring(_), Some(_)) => bail!("an edge colouring cannot be read as a design or partition"),
    };
    Ok(match target {
        Target::Pbd { n, blocks, resolution } => verify_pbd(n, blocks, resolution),
        Target::Partition { graph, partition } => verify_partition(&graph, &partition),
    })
}

fn print_violations(report: &ValidationReport) {
    println!("valid: no ({} violations)", report.violations.len());
    for v in report.violations.iter().take(SHOWN_VIOLATIONS) {
        println!("  {v}");
    }
    if report.violations.len() > SHOWN_VIOLATIONS {
        println!("  ... and {} more", report.violations.len() - SHOWN_VIOLATIONS);
    }
}

fn verify_pbd(n: usize, blocks: Vec<Vec<usize>>, resolution: Option<Vec<Vec<usize>>>) -> Outcome {
    println!("design on {n} points, {} blocks", blocks.len());
    let report = validate_blocks(n, &blocks);
    if !report.ok {
        print_violations(&report);
        return Outcome::Invalid;
    }
    let (design, resolved) = match resolution {
        Some(classes) => match Design::with_resolution(n, blocks, classes) {
            Ok((d, r)) => {
                let ok = verify_resolution(&d, &r);
                (d, Some((r.classes.len(), ok)))
            }
            Err(e) => {
                println!("valid: no (resolution: {e})");
                return Outcome::Invalid;
            }
        },
        None => (Design::new(n, blocks).expect("validated blocks form a design"), None),
    };
    if let Some((classes, false)) = resolved {
        println!("valid: no (the {classes} listed classes are not a resolution)");
        return Outcome::Invalid;
    }
    println!("valid: yes");
    if let Some((classes, _)) = resolved {
        println!("resolution: {classes} parallel classes");
    }
    if report.is_near_pencil {
        println!("shape: near-pencil");
    }
    let sigma = design.sigma();
    println!("sigma: {sigma}");
    println!("block sizes: {}", histogram(&design.block_size_histogram()));
    println!("valency histogram: {}", histogram(&count_values(&design.valencies())));
    println!("max valency: {}", design.max_valency());

    let tau = design.max_block_size();
    let mut rows: Vec<(String, BoundValue, Rational)> = Vec::new();
    let s = Rational::from_integer(sigma as i128);
    if report.is_nontrivial {
        if let Ok(b) = sigma_lower_dbe(n) {
            rows.push(("dbe (3n-3)".into(), b, s));
        }
        if let Ok(b) = max_valency_lower(n) {
            rows.push(("max-valency".into(), b, Rational::from_integer(design.max_valency() as i128)));
        }
        for (name, f) in [("A", bound_a as fn(usize, usize) -> _), ("B", bound_b), ("C", bound_c)] {
            if let Ok(b) = f(n, tau) {
                rows.push((format!("{name} (tau = {tau})"), b, s));
            }
        }
        if large_block_free_applies(n, tau) {
            if let Ok(b) = large_block_free_lower(n) {
                rows.push(("large-block-free".into(), b, s));
            }
        }
    } else {
        println!("trivial design (one block holds every point): no lower bounds apply");
    }
    print_bound_rows(&rows);
    Outcome::Ok
}

/// Prints each lower bound against the achieved value and the equalities.
fn print_bound_rows(rows: &[(String, BoundValue, Rational)]) {
    if rows.is_empty() {
        return;
    }
    println!("lower bounds:");
    let mut equal = Vec::new();
    for (name, b, achieved) in rows {
        let status = if *achieved == b.exact {
            equal.push(name.split(' ').next().unwrap_or(name).to_string());
            "equality"
        } else if *achieved > b.exact {
            "holds"
        } else {
            "VIOLATED"
        };
        println!("  {name:<24} {:<28} {status}", bound(b));
    }
    if equal.is_empty() {
        println!("equalities: none");
    } else {
        println!("equalities: {}", equal.join(", "));
    }
}

fn verify_partition(graph: &Graph, partition: &CliquePartition) -> Outcome {
    let n = graph.n();
    println!(
        "partition of {} ({} vertices, {} edges), {} cliques",
        graph.family(),
        n,
        graph.edge_count(),
        partition.len()
    );
    let report = validate_partition(graph, partition);
    if !report.ok {
        print_violations(&report);
        return Outcome::Invalid;
    }
    println!("valid: yes");
    let sigma = partition.sigma();
    println!("sigma: {sigma}");
    println!("clique sizes: {}", histogram(&partition.size_histogram()));
    println!("valency histogram: {}", histogram(&count_values(&partition.valencies(n))));

    let s = Rational::from_integer(sigma as i128);
    let mut rows: Vec<(String, BoundValue, Rational)> = Vec::new();
    match graph.family() {
        GraphFamily::CompleteMinusClique { n, m } => {
            if let Ok(b) = scp_knkm_bounds(n, m) {
                rows.push(("knkm-lower".into(), b.lower, s));
                println!("knkm upper: {} ({})", bound(&b.upper), if s <= b.upper.exact { "holds" } else { "exceeded" });
            }
            if let Ok(b) = scp_knkm_halfcase_exact(n, m) {
                rows.push(("knkm-halfcase".into(), b, s));
            }
            if let Ok(b) = knkm_small_m_lower(n, m) {
                rows.push(("knkm-small-m".into(), b, s));
            }
        }
        GraphFamily::ComplementPath { .. }
        | GraphFamily::ComplementCycle { .. }
        | GraphFamily::CocktailParty { .. } => {
            if let Some(b) = complement_lemma(graph) {
                rows.push(("complement-lemma".into(), b, s));
            }
        }
        GraphFamily::Explicit => {}
    }
    print_bound_rows(&rows);
    Outcome::Ok
}

/// The complement bound for `G = K_n - H` with `H` a path, cycle or
/// matching. `H` is triangle-free there, so `scp(H) = 2|E(H)|`.
fn complement_lemma(graph: &Graph) -> Option<BoundValue> {
    let n = graph.n();
    if n < 10 {
        return None;
    }
    let h_edges = n * (n - 1) / 2 - graph.edge_count();
    let omega_hbar = clique_number_closed_form(graph).ok()?;
    scp_complement_lower(n, 2 * h_edges as u64, 2, omega_hbar, n).ok()
}
