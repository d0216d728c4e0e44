//! Pairwise balanced designs and sigma clique partitions.
//!
//! Finite fields and classical designs, exact lower bounds on the sum of
//! block sizes, clique partitions of `K_n - H`, the constructions that meet
//! or approach those bounds, and an exhaustive solver used as an oracle.

pub mod algebra;
pub mod bounds;
pub mod classical;
pub mod constructions;
pub mod design;
pub mod graphs;
pub mod io;
pub mod solver;
pub mod validation;

pub use algebra::{FiniteField, PrimePower};
pub use bounds::{BoundSource, BoundValue, Rational};
pub use classical::{EdgeColoring, ResolvableOptions};
pub use constructions::{CertificateKind, ConstructedObject, ConstructionCertificate, ConstructionTag};
pub use design::{validate_pbd, Design, Resolution};
pub use graphs::{validate_partition, CliquePartition, Graph, GraphFamily};
pub use io::Document;
pub use solver::{Objective, SolverLimits, SolverResult, Witness};
pub use validation::{ValidationReport, Violation, ViolationKind};
