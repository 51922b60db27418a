//! Immutable graph and simplicial-complex types.

mod complex;
mod mdag;
mod node;
mod pdag;

pub use complex::{closure, SimplicialComplex};
pub(crate) use complex::is_subset;
pub use mdag::Mdag;
pub use node::{Node, NodeId, NodeKind};
pub use pdag::{is_temporally_consistent, validate, NamedParts, Pdag, ValidationReport, Violation};
