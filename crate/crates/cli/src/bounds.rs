use anyhow::{bail, Result};
use pbd_core::bounds::{
    best_sigma_lower, bound_a, bound_b, bound_c, cn_bounds, knkm_small_m_lower, large_block_free_lower,
    max_valency_lower, scp_knkm_bounds, scp_knkm_halfcase_exact, sigma_lower_dbe,
};

use crate::report::{bound, rational};
use crate::{BoundsArgs, Outcome};

pub fn run(args: &BoundsArgs) -> Result<Outcome> {
    let n = args.n;
    if n < 3 {
        bail!("need n >= 3, got {n}");
    }
    if args.csv {
        if args.m.is_some() || args.tau.is_some() {
            bail!("--csv prints every tau and takes no --m or --tau");
        }
        print!("{}", csv_table(n)?);
        return Ok(Outcome::Ok);
    }
    println!("n = {n}");
    println!("dbe lower (3n-3): {}", bound(&sigma_lower_dbe(n)?));
    println!("max-valency lower: {}", bound(&max_valency_lower(n)?));
    match large_block_free_lower(n) {
        Ok(b) => println!("large-block-free lower: {}", bound(&b)),
        Err(_) => println!("large-block-free lower: needs n >= 10"),
    }
    if let Some(tau) = args.tau {
        if tau < 2 || tau + 1 > n {
            bail!("need 2 <= tau <= n - 1, got tau = {tau}");
        }
        println!("tau = {tau}");
        println!("  A: {}", bound(&bound_a(n, tau)?));
        println!("  B: {}", bound(&bound_b(n, tau)?));
        println!("  C: {}", bound(&bound_c(n, tau)?));
        let best = best_sigma_lower(n, tau)?;
        println!("  best: {} from {}", bound(&best), best.source);
    } else if let Some(m) = args.m {
        knkm(n, m)?;
    } else {
        println!("{:>5} {:>12} {:>12} {:>12} {:>12}  source", "tau", "A", "B", "C", "best");
        for tau in 2..n {
            let best = best_sigma_lower(n, tau)?;
            println!(
                "{tau:>5} {:>12} {:>12} {:>12} {:>12}  {}",
                bound_a(n, tau)?.exact.to_string(),
                bound_b(n, tau)?.exact.to_string(),
                bound_c(n, tau)?.exact.to_string(),
                best.exact.to_string(),
                best.source
            );
        }
    }
    Ok(Outcome::Ok)
}

fn knkm(n: usize, m: usize) -> Result<()> {
    let b = scp_knkm_bounds(n, m)?;
    println!("scp(K_{n} - K_{m}):");
    println!("  lower: {}", bound(&b.lower));
    println!("  upper: {}", bound(&b.upper));
    if let Ok(h) = scp_knkm_halfcase_exact(n, m) {
        println!("  exact (m >= n/2): {}", bound(&h));
    }
    if let Ok(s) = knkm_small_m_lower(n, m) {
        println!("  small-m lower: {}", bound(&s));
    }
    if let Ok(c) = cn_bounds(n, m) {
        println!("  c = m/n = {}, k = floor(1/c) = {}", c.c, c.k);
        println!("  leading lower: {} n^2 = {}", c.lower_coefficient, rational(&c.lower.exact));
        println!("  leading upper: {} n^2 = {}", c.upper_coefficient, rational(&c.upper.exact));
    }
    Ok(())
}

/// `tau,A,B,C,best,source` for tau in `2..n`, exact rationals only.
pub fn csv_table(n: usize) -> Result<String> {
    let mut out = String::from("tau,A,B,C,best,source\n");
    for tau in 2..n {
        let best = best_sigma_lower(n, tau)?;
        out.push_str(&format!(
            "{tau},{},{},{},{},{}\n",
            bound_a(n, tau)?.exact,
            bound_b(n, tau)?.exact,
            bound_c(n, tau)?.exact,
            best.exact,
            best.source
        ));
    }
    Ok(out)
}
