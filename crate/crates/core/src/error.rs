use thiserror::Error;

/// Errors produced while loading graphs, embedding, clustering and reporting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("negative weight {weight} on edge ({src}, {dst}) at line {line}")]
    NegativeWeight {
        line: usize,
        src: String,
        dst: String,
        weight: f64,
    },

    #[error("node {label:?} is isolated (degree 0)")]
    IsolatedNode { label: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("gml: {0}")]
    Gml(String),

    #[error("duplicate node {0:?}")]
    DuplicateNode(String),

    #[error("edge references unknown node id {0:?}")]
    UnknownNode(String),

    #[error("unbalanced brackets: {0}")]
    UnbalancedBrackets(String),

    #[error("requested {requested} eigenpairs but graph has {n} nodes")]
    TooManyEigenpairs { requested: usize, n: usize },

    #[error("eigensolver did not converge within {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("total conflict: m(empty set) = 1, pignistic transform undefined")]
    TotalConflict,

    #[error("singular prototype system: cluster {cluster} receives no mass")]
    SingularSystem { cluster: usize },

    #[error("empty cluster {cluster} after all restarts")]
    EmptyCluster { cluster: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("full powerset catalog requested for c = {c}; use a cardinality cap (e.g. 2) when c > {max}")]
    CatalogTooLarge { c: usize, max: usize },

    #[error("c = {c}: {source}")]
    AtCommunityCount {
        c: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::EigenNoConvergence { .. }
            | Error::TotalConflict
            | Error::SingularSystem { .. }
            | Error::EmptyCluster { .. } => true,
            Error::AtCommunityCount { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    pub(crate) fn at_c(self, c: usize) -> Error {
        Error::AtCommunityCount {
            c,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
