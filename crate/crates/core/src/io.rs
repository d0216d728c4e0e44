//! JSON files for designs, clique partitions and edge colourings.
//!
//! Output is deterministic: fields in a fixed order, two-space indent, and
//! arrays of numbers kept on one line, so a block or clique is one line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bounds::{BoundSource, BoundValue, Rational};
use crate::classical::EdgeColoring;
use crate::constructions::{CertificateKind, ConstructedObject, ConstructionCertificate, ConstructionTag};
use crate::design::{Design, DesignError, Resolution};
use crate::graphs::{CliquePartition, Graph, GraphError, GraphFamily};
use crate::solver::{Objective, SolverResult, Witness};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported format version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("file holds a {found}, expected a {expected}")]
    WrongKind { expected: &'static str, found: String },
    #[error("invalid content: {0}")]
    Content(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        IoError::Parse { line: e.line(), column: e.column(), message }
    }
}

/// How the certificate block records a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub construction: ConstructionTag,
    pub parameters: BTreeMap<String, u64>,
    /// Exact rational, `p` or `p/q`.
    pub claimed: String,
    pub claimed_source: BoundSource,
    pub kind: CertificateKind,
    pub achieved_sigma: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverRecord {
    pub objective: Objective,
    pub optimum: u64,
    pub nodes: u64,
    pub budget: Option<u64>,
    pub proved_optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub version: u32,
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphDescriptor {
    CompleteMinusClique { n: usize, m: usize },
    ComplementPath { n: usize },
    ComplementCycle { n: usize },
    CocktailParty { n: usize },
    Explicit { n: usize, edges: Vec<[usize; 2]> },
}

impl GraphDescriptor {
    pub fn of(g: &Graph) -> Self {
        match g.family() {
            GraphFamily::CompleteMinusClique { n, m } => GraphDescriptor::CompleteMinusClique { n, m },
            GraphFamily::ComplementPath { n } => GraphDescriptor::ComplementPath { n },
            GraphFamily::ComplementCycle { n } => GraphDescriptor::ComplementCycle { n },
            GraphFamily::CocktailParty { n } => GraphDescriptor::CocktailParty { n },
            GraphFamily::Explicit => {
                GraphDescriptor::Explicit { n: g.n(), edges: g.edges().map(|(a, b)| [a, b]).collect() }
            }
        }
    }

    pub fn to_graph(&self) -> Result<Graph, IoError> {
        Ok(match *self {
            GraphDescriptor::CompleteMinusClique { n, m } => Graph::complete_minus_clique(n, m)?,
            GraphDescriptor::ComplementPath { n } => Graph::complement_path(n)?,
            GraphDescriptor::ComplementCycle { n } => Graph::complement_cycle(n)?,
            GraphDescriptor::CocktailParty { n } => Graph::cocktail_party(n)?,
            GraphDescriptor::Explicit { n, ref edges } => {
                let pairs: Vec<_> = edges.iter().map(|&[a, b]| (a, b)).collect();
                Graph::from_edges(n, &pairs)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub version: u32,
    pub graph: GraphDescriptor,
    pub cliques: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoringFile {
    pub version: u32,
    pub v: usize,
    pub classes: Vec<Vec<[usize; 2]>>,
}

/// Any file this crate reads or writes, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Design(DesignFile),
    Partition(PartitionFile),
    EdgeColoring(EdgeColoringFile),
}

#[derive(Deserialize)]
struct Header {
    version: u32,
    kind: String,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Design(_) => "design",
            Document::Partition(_) => "partition",
            Document::EdgeColoring(_) => "edge-coloring",
        }
    }

    pub fn design(d: &Design, resolution: Option<&Resolution>) -> Self {
        Document::Design(DesignFile {
            version: FORMAT_VERSION,
            n: d.n(),
            blocks: d.blocks().to_vec(),
            resolution: resolution.map(|r| r.classes.clone()),
            certificate: None,
            solver: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn partition(g: &Graph, p: &CliquePartition) -> Self {
        Document::Partition(PartitionFile {
            version: FORMAT_VERSION,
            graph: GraphDescriptor::of(g),
            cliques: p.cliques().to_vec(),
            certificate: None,
            solver: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn edge_coloring(c: &EdgeColoring) -> Self {
        Document::EdgeColoring(EdgeColoringFile {
            version: FORMAT_VERSION,
            v: c.v,
            classes: c.classes.iter().map(|cl| cl.iter().map(|&(a, b)| [a, b]).collect()).collect(),
        })
    }

    pub fn certificate(c: &ConstructionCertificate) -> Self {
        let mut doc = match &c.object {
            ConstructedObject::Design(d) => Self::design(d, None),
            ConstructedObject::Partition { graph, partition } => Self::partition(graph, partition),
        };
        let record = CertificateRecord {
            construction: c.construction,
            parameters: c.parameters.clone(),
            claimed: c.claimed.exact.to_string(),
            claimed_source: c.claimed.source,
            kind: c.kind,
            achieved_sigma: c.achieved_sigma,
        };
        match &mut doc {
            Document::Design(f) => f.certificate = Some(record),
            Document::Partition(f) => f.certificate = Some(record),
            Document::EdgeColoring(_) => unreachable!(),
        }
        doc
    }

    /// A solver witness with its search statistics. `graph` is the searched
    /// graph for partition witnesses.
    pub fn solver_result(r: &SolverResult, graph: Option<&Graph>) -> Self {
        let record = SolverRecord {
            objective: r.objective,
            optimum: r.optimum,
            nodes: r.nodes_explored,
            budget: r.budget,
            proved_optimal: r.proved_optimal,
        };
        let mut doc = match (&r.witness, graph) {
            (Witness::Design(d), _) => Self::design(d, None),
            (Witness::Partition(p), Some(g)) => Self::partition(g, p),
            (Witness::Partition(p), None) => {
                let n = p.cliques().iter().flatten().max().map_or(0, |&x| x + 1);
                let g = Graph::from_edges(n, &[]).expect("empty graph");
                Self::partition(&g, p)
            }
        };
        match &mut doc {
            Document::Design(f) => f.solver = Some(record),
            Document::Partition(f) => f.solver = Some(record),
            Document::EdgeColoring(_) => unreachable!(),
        }
        doc
    }

    pub fn metadata_mut(&mut self) -> Option<&mut BTreeMap<String, String>> {
        match self {
            Document::Design(f) => Some(&mut f.metadata),
            Document::Partition(f) => Some(&mut f.metadata),
            Document::EdgeColoring(_) => None,
        }
    }

    pub fn certificate_record(&self) -> Option<&CertificateRecord> {
        match self {
            Document::Design(f) => f.certificate.as_ref(),
            Document::Partition(f) => f.certificate.as_ref(),
            Document::EdgeColoring(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("documents always serialize");
        let mut out = String::new();
        write_value(&value, 0, &mut out);
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let header: Header = serde_json::from_str(text)?;
        if header.version != FORMAT_VERSION {
            return Err(IoError::Version { found: header.version });
        }
        // parse the concrete type so errors keep their positions
        Ok(match header.kind.as_str() {
            "design" => Document::Design(serde_json::from_str(text)?),
            "partition" => Document::Partition(serde_json::from_str(text)?),
            "edge-coloring" => Document::EdgeColoring(serde_json::from_str(text)?),
            other => return Err(IoError::Content(format!("unknown kind {other:?}"))),
        })
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| IoError::File { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, self.to_json())
            .map_err(|source| IoError::File { path: path.display().to_string(), source })
    }
}

impl DesignFile {
    /// The canonical design and its resolution remapped to canonical order.
    pub fn to_design(&self) -> Result<(Design, Option<Resolution>), IoError> {
        match &self.resolution {
            Some(classes) => {
                let (d, r) = Design::with_resolution(self.n, self.blocks.clone(), classes.clone())?;
                Ok((d, Some(r)))
            }
            None => Ok((Design::new(self.n, self.blocks.clone())?, None)),
        }
    }
}

impl PartitionFile {
    pub fn to_partition(&self) -> Result<(Graph, CliquePartition), IoError> {
        Ok((self.graph.to_graph()?, CliquePartition::new(self.cliques.clone())))
    }
}

impl EdgeColoringFile {
    pub fn to_coloring(&self) -> EdgeColoring {
        EdgeColoring {
            v: self.v,
            classes: self.classes.iter().map(|cl| cl.iter().map(|&[a, b]| (a, b)).collect()).collect(),
        }
    }
}

impl CertificateRecord {
    pub fn claimed_value(&self) -> Result<BoundValue, IoError> {
        let exact = Rational::from_str(&self.claimed)
            .map_err(|_| IoError::Content(format!("claimed value {:?} is not a rational", self.claimed)))?;
        Ok(BoundValue::new(exact, self.claimed_source))
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(indent));
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String(k.clone()));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(indent));
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimePower;
    use crate::classical::{affine_plane, one_factorization};
    use crate::constructions::{complement_path_partition, pbdc_equality};
    use crate::solver::{exact_s_prime, exact_scp, SolverLimits};
    use proptest::prelude::*;

    fn round_trip(doc: &Document) -> Document {
        let text = doc.to_json();
        let back = Document::parse(&text).unwrap();
        assert_eq!(back.to_json(), text, "bytes changed on rewrite");
        back
    }

    #[test]
    fn design_layout() {
        let (d, r) = affine_plane(PrimePower::new(2).unwrap()).unwrap();
        let doc = Document::design(&d, Some(&r));
        let text = doc.to_json();
        assert!(text
            .starts_with("{\n  \"kind\": \"design\",\n  \"version\": 1,\n  \"n\": 4,\n  \"blocks\": [\n    [0, 1],\n"));
        let Document::Design(f) = round_trip(&doc) else { panic!() };
        let (d2, r2) = f.to_design().unwrap();
        assert_eq!((d2, r2), (d, Some(r)));
    }

    #[test]
    fn partition_and_certificate() {
        let c = pbdc_equality(6, 3).unwrap();
        let doc = Document::certificate(&c);
        let back = round_trip(&doc);
        let rec = back.certificate_record().unwrap();
        assert_eq!(rec.claimed_value().unwrap(), c.claimed);
        let c = complement_path_partition(30).unwrap();
        let Document::Partition(f) = round_trip(&Document::certificate(&c)) else { panic!() };
        let (g, p) = f.to_partition().unwrap();
        assert_eq!(c.partition().unwrap(), (&g, &p));
        let explicit = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let doc = Document::partition(&explicit, &CliquePartition::all_edges(&explicit));
        let Document::Partition(f) = round_trip(&doc) else { panic!() };
        assert_eq!(f.to_partition().unwrap().0, explicit);
    }

    #[test]
    fn solver_and_coloring() {
        let g = Graph::complete_minus_clique(6, 3).unwrap();
        let r = exact_scp(&g, &SolverLimits::default()).unwrap();
        let Document::Partition(f) = round_trip(&Document::solver_result(&r, Some(&g))) else { panic!() };
        assert_eq!(f.solver.unwrap().optimum, 15);
        let r = exact_s_prime(7, 3, &SolverLimits::default()).unwrap();
        round_trip(&Document::solver_result(&r, None));
        let col = one_factorization(6).unwrap();
        let Document::EdgeColoring(f) = round_trip(&Document::edge_coloring(&col)) else { panic!() };
        assert_eq!(f.to_coloring(), col);
    }

    #[test]
    fn errors_carry_positions() {
        match Document::parse("{\n  \"version\": 1,\n  \"kind\": \"design\",\n  \"n\": 3,\n  \"blocks\": [[0, 1]\n}") {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Document::parse("{\"version\": 2, \"kind\": \"design\", \"n\": 1, \"blocks\": []}"),
            Err(IoError::Version { found: 2 })
        ));
        assert!(matches!(Document::parse("{\"version\": 1, \"kind\": \"poem\"}"), Err(IoError::Content(_))));
        match Document::parse("{\"version\": 1, \"kind\": \"design\", \"n\": \"three\", \"blocks\": []}") {
            Err(IoError::Parse { line: 1, column, .. }) => assert!(column > 30),
            other => panic!("{other:?}"),
        }
    }

    fn arb_design() -> impl Strategy<Value = Design> {
        (3usize..12).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::btree_set(0..n, 2..=n.min(5)), 0..12)
                .prop_map(move |bs| Design::new(n, bs.into_iter().map(|b| b.into_iter().collect()).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn designs_round_trip(d in arb_design(), key in "[a-z]{1,6}", val in "[ -~]{0,12}") {
            let mut doc = Document::design(&d, None);
            doc.metadata_mut().unwrap().insert(key, val);
            let back = round_trip(&doc);
            prop_assert_eq!(&back, &doc);
            let Document::Design(f) = back else { unreachable!() };
            prop_assert_eq!(f.to_design().unwrap().0, d);
        }

        #[test]
        fn partitions_round_trip(n in 2usize..10, edges in proptest::collection::vec((0usize..10, 0usize..10), 0..20)) {
            let edges: Vec<_> = edges.into_iter().filter(|&(a, b)| a < n && b < n && a != b).collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let doc = Document::partition(&g, &CliquePartition::all_edges(&g));
            prop_assert_eq!(round_trip(&doc), doc);
        }
    }
}
