use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use pbd_core::constructions::{path_constant, rebuild};
use pbd_core::{CertificateKind, ConstructedObject, ConstructionTag, Document};

use crate::report::bound;
use crate::{ConstructArgs, Outcome};

pub fn run(args: &ConstructArgs) -> Result<Outcome> {
    if args.what == "list" {
        for tag in ConstructionTag::ALL {
            if tag != ConstructionTag::Truncated {
                println!("{tag}");
            }
        }
        return Ok(Outcome::Ok);
    }
    let tag = ConstructionTag::from_name(&args.what)
        .ok_or_else(|| anyhow!("unknown construction {:?}; run `pbd construct --what list`", args.what))?;
    let mut params = BTreeMap::new();
    for (key, value) in [("n", args.n), ("m", args.m), ("k", args.k)] {
        if let Some(v) = value {
            params.insert(key.to_string(), v as u64);
        }
    }
    if let Some(q) = args.q {
        params.insert("q".to_string(), q);
    }
    let cert = rebuild(tag, &params)?;

    let shown: Vec<String> = cert.parameters.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    println!("construction: {tag} ({})", shown.join(", "));
    match &cert.object {
        ConstructedObject::Design(d) => println!("object: design on {} points, {} blocks", d.n(), d.block_count()),
        ConstructedObject::Partition { graph, partition } => {
            println!("object: partition of {} into {} cliques", graph.family(), partition.len())
        }
    }
    println!("achieved sigma: {}", cert.achieved_sigma);
    let relation = match cert.kind {
        CertificateKind::Equality => "sigma equals",
        CertificateKind::UpperBound => "sigma at most",
    };
    println!("claimed: {relation} {} ({})", bound(&cert.claimed), cert.claimed.source);
    println!("equality: {}", if cert.is_tight() { "yes" } else { "no" });
    if tag == ConstructionTag::CompPath {
        let n = cert.parameters["n"] as f64;
        println!("sigma / n^1.5: {:.6}", cert.achieved_sigma as f64 / n.powf(1.5));
        println!("c = (sigma - n^1.5) / n^1.3: {:.6}", path_constant(n as usize, cert.achieved_sigma));
    }
    if let Some(out) = &args.out {
        Document::certificate(&cert).write(out)?;
        println!("wrote {}", out.display());
    }
    Ok(Outcome::Ok)
}
