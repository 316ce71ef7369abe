//! Sparse representations of bipartite (and bipartized) graphs: a bounded-
//! height decomposition tree plus membership edges, built by alternating
//! near-twin elimination branchings with bipartite complementation, and
//! exactly invertible by a parity rule on the tree.

pub mod bitset;
pub mod branching;
pub mod covers;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod reconstruct;
pub mod tree;

pub use bitset::Bitset;
pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Graph, LoadedGraph};
pub use tree::SparseRep;
