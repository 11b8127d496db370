//! Overlapping community detection for weighted undirected graphs.
//!
//! Nodes are embedded with the leading eigenvectors of `A x = λ D x`,
//! clustered with evidential c-means into a credal partition (one mass
//! function over sets of communities per node), and the community count is
//! chosen by maximizing the evidential modularity, the modularity bilinear
//! form evaluated on singleton plausibilities.
//!
//! ```no_run
//! use evcomm::{detect, parse_gml, SweepConfig};
//!
//! let g = parse_gml(&std::fs::read_to_string("karate.gml").unwrap()).unwrap();
//! let report = detect(&g, &SweepConfig::new(2, 6)).unwrap();
//! let best = report.best();
//! for i in best.imprecise_nodes() {
//!     println!("{} -> {}", g.label(i), best.credal[i].set);
//! }
//! ```

pub mod baseline;
pub mod belief;
pub mod cli;
pub mod ecm;
pub mod error;
pub mod gml;
pub mod graph;
pub mod modularity;
pub mod pipeline;
pub mod report;
pub mod spectral;

pub use belief::{
    hard_credal_assignment, CredalAssignment, CredalPartition, FocalSet, FocalSetCatalog,
    MassFunction,
};
pub use ecm::{ecm_cluster, ecm_objective, update_masses, update_prototypes, Barycenters, EcmParams, EcmResult};
pub use error::{Error, Result};
pub use gml::{parse_gml, parse_gml_document, GmlDocument};
pub use graph::{parse_edge_list, Graph, GraphBuilder, GraphStats};
pub use modularity::{evidential_modularity, fuzzy_modularity, hard_modularity, PartitionView};
pub use pipeline::{detect, CResult, CatalogPolicy, DetectionReport, SweepConfig};
pub use report::{curve_csv, export_dot, ReportDocument};
pub use spectral::{embed, generalized_eigs, Eigenpairs, Embedding};
