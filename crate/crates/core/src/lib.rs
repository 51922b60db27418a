//! Marginalized DAGs, node splitting, structural dominance and exact
//! probing-scheme shadows over discrete causal models.
//!
//! The probability engine is generic over [`Probability`]; the aliases below
//! fix it to exact rationals or to `f64`.

pub mod dsep;
pub mod error;
pub mod graph;
pub mod json;
pub mod models;
pub mod order;
pub mod parallel;
pub mod reduction;
pub mod scalar;
pub mod swig;

pub use error::{Error, Result};
pub use graph::{Mdag, Node, NodeId, NodeKind, Pdag, SimplicialComplex};
pub use scalar::Probability;

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type ExactParams = models::Params<Exact>;
pub type ExactTable = models::Table<Exact>;
pub type ExactFullConditional = models::FullConditional<Exact>;
pub type ExactDataset = models::ProbeDataset<Exact>;
pub type ExactVerdict = models::Verdict<Exact>;
pub type ExactWitness = models::Witness<Exact>;

pub type FloatParams = models::Params<f64>;
pub type FloatTable = models::Table<f64>;
pub type FloatFullConditional = models::FullConditional<f64>;
pub type FloatDataset = models::ProbeDataset<f64>;
