use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use pbd_core::classical::{affine_plane, projective_plane};
use pbd_core::constructions::rebuild;
use pbd_core::design::validate_blocks;
use pbd_core::{validate_partition, ConstructedObject, ConstructionTag, Design, Document, PrimePower};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CatalogAction, CatalogArgs, Outcome};

pub const INDEX_FILE: &str = "catalog.json";
const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// File name inside the catalog directory.
    pub path: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, u64>,
    pub sha256: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Index {
    version: u32,
    entries: Vec<CatalogEntry>,
}

pub fn run(args: &CatalogArgs) -> Result<Outcome> {
    if !args.dir.is_dir() {
        bail!("{} is not a directory", args.dir.display());
    }
    match args.action {
        CatalogAction::List => list(&args.dir),
        CatalogAction::Add => {
            let file = args.file.as_deref().ok_or_else(|| anyhow!("catalog add needs --file"))?;
            add(&args.dir, file)
        }
        CatalogAction::Check => check(&args.dir),
    }
}

fn load(dir: &Path) -> Result<Index> {
    let path = dir.join(INDEX_FILE);
    if !path.exists() {
        return Ok(Index { version: INDEX_VERSION, entries: Vec::new() });
    }
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let index: Index = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if index.version != INDEX_VERSION {
        bail!("{}: unsupported index version {}", path.display(), index.version);
    }
    Ok(index)
}

fn save(dir: &Path, index: &Index) -> Result<()> {
    let mut text = serde_json::to_string_pretty(index)?;
    text.push('\n');
    fs::write(dir.join(INDEX_FILE), text)?;
    Ok(())
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn entries(k: usize) -> String {
    if k == 1 {
        "1 entry".into()
    } else {
        format!("{k} entries")
    }
}

fn describe(e: &CatalogEntry) -> String {
    let params: Vec<String> = e.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    match &e.construction {
        Some(c) => format!("{c}({})", params.join(", ")),
        None => "-".to_string(),
    }
}

fn list(dir: &Path) -> Result<Outcome> {
    let index = load(dir)?;
    println!("{}", entries(index.entries.len()));
    for e in &index.entries {
        println!("{}  kind={}  {}  sha256={}", e.path, e.kind, describe(e), &e.sha256[..12.min(e.sha256.len())]);
    }
    Ok(Outcome::Ok)
}

/// The construction and parameters a document records about itself.
fn provenance(doc: &Document) -> (Option<String>, BTreeMap<String, u64>) {
    if let Some(rec) = doc.certificate_record() {
        return (Some(rec.construction.name().to_string()), rec.parameters.clone());
    }
    let meta = match doc {
        Document::Design(f) => &f.metadata,
        Document::Partition(f) => &f.metadata,
        Document::EdgeColoring(_) => return (None, BTreeMap::new()),
    };
    let construction = meta.get("construction").cloned();
    let params = meta.iter().filter_map(|(k, v)| v.parse::<u64>().ok().map(|v| (k.clone(), v))).collect();
    (construction, params)
}

/// Reasons the stored object is not a valid design or partition.
fn object_problem(doc: &Document) -> Option<String> {
    let report = match doc {
        Document::Design(f) => validate_blocks(f.n, &f.blocks),
        Document::Partition(f) => match f.to_partition() {
            Ok((g, p)) => validate_partition(&g, &p),
            Err(e) => return Some(e.to_string()),
        },
        Document::EdgeColoring(_) => return Some("edge colourings are not catalogued".into()),
    };
    if report.ok {
        return None;
    }
    let first = report.violations.first().map(|v| v.to_string()).unwrap_or_default();
    Some(format!("{} violations, first: {first}", report.violations.len()))
}

fn stored_object(doc: &Document) -> Result<ConstructedObject> {
    Ok(match doc {
        Document::Design(f) => ConstructedObject::Design(f.to_design()?.0),
        Document::Partition(f) => {
            let (graph, partition) = f.to_partition()?;
            ConstructedObject::Partition { graph, partition }
        }
        Document::EdgeColoring(_) => bail!("edge colourings are not catalogued"),
    })
}

fn rebuilt_object(construction: &str, params: &BTreeMap<String, u64>) -> Result<Option<ConstructedObject>> {
    let q = || -> Result<PrimePower> {
        let q = params.get("q").ok_or_else(|| anyhow!("parameter q missing"))?;
        Ok(PrimePower::new(*q)?)
    };
    let design = |d: Design| Some(ConstructedObject::Design(d));
    Ok(match construction {
        "affine-plane" => design(affine_plane(q()?)?.0),
        "projective-plane" => design(projective_plane(q()?)?),
        name => match ConstructionTag::from_name(name) {
            Some(ConstructionTag::Truncated) | None => None,
            Some(tag) => Some(rebuild(tag, params)?.object),
        },
    })
}

fn add(dir: &Path, file: &Path) -> Result<Outcome> {
    let bytes = fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", file.display()))?;
    let doc = match Document::parse(&text) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return Ok(Outcome::Invalid);
        }
    };
    if let Some(problem) = object_problem(&doc) {
        eprintln!("{}: not added: {problem}", file.display());
        return Ok(Outcome::Invalid);
    }
    let name = file
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("{} has no usable file name", file.display()))?
        .to_string();
    if name == INDEX_FILE {
        bail!("{INDEX_FILE} is reserved for the index");
    }
    let dest = dir.join(&name);
    let same = dest.exists() && fs::canonicalize(&dest)? == fs::canonicalize(file)?;
    if !same {
        fs::write(&dest, &bytes).with_context(|| format!("writing {}", dest.display()))?;
    }
    let (construction, parameters) = provenance(&doc);
    let entry = CatalogEntry {
        path: name.clone(),
        kind: doc.kind().to_string(),
        construction,
        parameters,
        sha256: sha256(&bytes),
    };
    let mut index = load(dir)?;
    index.entries.retain(|e| e.path != name);
    println!("added {name}  kind={}  {}", entry.kind, describe(&entry));
    index.entries.push(entry);
    index.entries.sort_by(|a, b| a.path.cmp(&b.path));
    save(dir, &index)?;
    Ok(Outcome::Ok)
}

fn check_entry(dir: &Path, e: &CatalogEntry) -> Result<(), String> {
    let bytes = fs::read(dir.join(&e.path)).map_err(|err| format!("cannot read: {err}"))?;
    let found = sha256(&bytes);
    if found != e.sha256 {
        return Err(format!("checksum mismatch (index {}, file {})", e.sha256, found));
    }
    let text = String::from_utf8(bytes).map_err(|_| "not UTF-8".to_string())?;
    let doc = Document::parse(&text).map_err(|err| err.to_string())?;
    if doc.kind() != e.kind {
        return Err(format!("index says {} but the file holds a {}", e.kind, doc.kind()));
    }
    if let Some(problem) = object_problem(&doc) {
        return Err(problem);
    }
    if let Some(construction) = &e.construction {
        let stored = stored_object(&doc).map_err(|err| err.to_string())?;
        match rebuilt_object(construction, &e.parameters) {
            Ok(Some(rebuilt)) if rebuilt != stored => {
                return Err(format!("differs from {} rebuilt with its parameters", describe(e)))
            }
            Ok(_) => {}
            Err(err) => return Err(format!("cannot rebuild {}: {err:#}", describe(e))),
        }
    }
    Ok(())
}

fn check(dir: &Path) -> Result<Outcome> {
    let index = load(dir)?;
    let mut failed = 0;
    for e in &index.entries {
        match check_entry(dir, e) {
            Ok(()) => println!("ok    {}", e.path),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {}: {reason}", e.path);
            }
        }
    }
    println!("{}, {failed} failed", entries(index.entries.len()));
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Invalid })
}
