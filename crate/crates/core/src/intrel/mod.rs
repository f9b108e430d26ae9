//! Lattice reduction and integer-relation detection.

mod lll;
mod relation;

pub use lll::{lll_reduce, LatticeBasis, LllOutput};
pub use relation::{find_function_relation, find_relation, NamedValue, RelationCandidate, RelationOutcome};
