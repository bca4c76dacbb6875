//! Longest paths and Gallai vertices of series-parallel graphs.
//!
//! The pipeline runs recognition ([`sp`]), completion to a spanning 2-tree,
//! a width-2 nice tree decomposition ([`decomposition`]) and a configuration
//! dynamic program ([`dp`]) that yields the longest-path length and, after a
//! marking pass, every Gallai vertex ([`gallai`]). The [`oracle`] module
//! provides exhaustive ground truth on small graphs and [`prooftrace`]
//! turns the structural lemmas into checkable certificates.

pub mod corpus;
pub mod decomposition;
pub mod dp;
pub mod gallai;
pub mod graph;
pub mod oracle;
pub mod path;
pub mod prooftrace;
pub mod sp;

pub use graph::{parse_edge_list, Graph, GraphError, ParseError, VertexSet};
pub use path::Path;
