//! Bose-Mesner algebra `M`, dual Bose-Mesner algebra `M*` and the lattice of
//! subspaces they generate, for distance-regular graphs.
//!
//! The pipeline runs graph → intersection numbers → spectrum → `M` → `M*`
//! (at a base vertex) → lattice. Every explicit basis and dimension formula
//! is instantiated numerically and reconciled against brute-force subspace
//! computations in [`matspace`].
//!
//! ```
//! use bmlattice::{analyze, AnalyzeOptions, NamedGraph};
//!
//! let graph: NamedGraph = "hypercube:3".parse().unwrap();
//! let report = analyze(&graph.build().unwrap(), &graph.to_string(), &AnalyzeOptions::default()).unwrap();
//! assert_eq!(report.pair_classification.p, 5);
//! assert!(report.passed());
//! ```

pub mod bm;
pub mod dual;
pub mod error;
pub mod families;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod matspace;
pub mod report;
pub mod scheme;
pub mod tol;
pub mod tridiag;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
pub use families::{build_named, Family, NamedGraph};
pub use graph::{intersection_array, is_distance_regular, Graph, IntersectionArray};
pub use report::{analyze, AnalyzeOptions, LatticeReport};
pub use scheme::Scheme;
pub use tol::Tolerances;
pub use verdict::Verdict;
