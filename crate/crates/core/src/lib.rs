//! Anytime treewidth: heuristic upper bounds from potential maximal cliques,
//! lower bounds from lifted contraction minors, and checkable certificates for
//! both.

pub mod bench;
pub mod bounds;
pub mod cancel;
pub mod certificate;
pub mod exact;
pub mod graph;
pub mod io;
pub mod lower;
pub mod preprocess;
pub mod separators;
pub mod solve;
pub mod td;
pub mod triangulation;
pub mod upper;

pub use cancel::{CancelToken, Cancelled};
pub use graph::{ContractionForest, Graph, GraphError, Minor, VertexSet};
pub use td::{TdViolation, TreeDecomposition};
