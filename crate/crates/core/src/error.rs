use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid node id {0:?}: ids must be non-empty and contain no whitespace")]
    InvalidNodeId(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("node {0} is not latent")]
    NotLatent(String),
    #[error("latent node {0} is already exogenous")]
    AlreadyExogenous(String),
    #[error("graph still has endogenous latent nodes: {0:?}")]
    EndogenousLatents(Vec<String>),
    #[error("node {0} is not visible")]
    NotVisible(String),
    #[error("split name {0:?} collides with an existing node")]
    NameCollision(String),
    #[error("facet mentions {0:?}, which is outside the ground set")]
    FacetOutsideGround(String),
    #[error("order is not a permutation of the visible nodes")]
    NotAPermutation,
    #[error("graphs do not share the same nodes and temporal order")]
    NodeMismatch,
    #[error("too many nodes for this operation: {0}")]
    TooManyNodes(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("value {value} out of range for node {node} (cardinality {card})")]
    OutOfRange { node: String, value: usize, card: usize },
    #[error("dataset is missing the pattern do({do_set:?}) = {values:?}")]
    MissingPattern { do_set: Vec<String>, values: Vec<usize> },
    #[error("operation requires binary variables; {0} has cardinality {1}")]
    NonBinary(String, usize),
    #[error("{0:?} is not a face of the mDAG")]
    NotAFace(Vec<String>),
    #[error("edge {0} -> {1} is absent")]
    EdgeAbsent(String, String),
    #[error("query sets overlap")]
    OverlappingSets,
    #[error("graphs are identical")]
    IdenticalGraphs,
    #[error("graph has latent nodes")]
    LatentNodes,
    #[error("graph has input nodes")]
    InputNodes,
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable kebab-case name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidNodeId(_) => "invalid-node-id",
            Error::UnknownNode(_) => "unknown-node",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::NotLatent(_) => "not-latent",
            Error::AlreadyExogenous(_) => "already-exogenous",
            Error::EndogenousLatents(_) => "endogenous-latents",
            Error::NotVisible(_) => "not-visible",
            Error::NameCollision(_) => "name-collision",
            Error::FacetOutsideGround(_) => "facet-outside-ground",
            Error::NotAPermutation => "not-a-permutation",
            Error::NodeMismatch => "node-mismatch",
            Error::TooManyNodes(_) => "too-many-nodes",
            Error::Shape(_) => "shape",
            Error::OutOfRange { .. } => "out-of-range",
            Error::MissingPattern { .. } => "missing-pattern",
            Error::NonBinary(..) => "non-binary",
            Error::NotAFace(_) => "not-a-face",
            Error::EdgeAbsent(..) => "edge-absent",
            Error::OverlappingSets => "overlapping-sets",
            Error::IdenticalGraphs => "identical-graphs",
            Error::LatentNodes => "latent-nodes",
            Error::InputNodes => "input-nodes",
            Error::Parse(_) => "parse",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
