//! Structural analysis of directed graphs through the lens of their graph
//! C*-algebras.
//!
//! Everything is decided on the graph: hereditary and saturated sets,
//! maximal tails, the ideal and quotient graphs of a gauge-invariant ideal,
//! isolated loops, the type I criterion, bounded graph traces, and the stable
//! rank trichotomy `1 | 2 | ∞`.
//!
//! ```
//! use cka::graph::parse_graph;
//! use cka::classify::{stable_rank, StableRank};
//!
//! let g = parse_graph("graph o2\nvertex v\nedge a v v\nedge b v v\n").unwrap();
//! let verdict = stable_rank(&g, &Default::default()).unwrap();
//! assert_eq!(verdict.value, StableRank::Infinite);
//! ```
//!
//! Graphs are finite: vertex sets are finite, while an edge bundle may carry
//! countably many parallel edges (multiplicity `ω`, written `xinf`).

pub mod classify;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod subsets;
pub mod tails;
pub mod traces;

pub mod corpus;

pub use error::{Error, GraphError, Result};
pub use graph::{Graph, Limits, VertexId, VertexSet};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/hersat.md")]
    mod hersat {}
    #[doc = include_str!("../../../book/src/tails.md")]
    mod tails {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/testing.md")]
    mod testing {}
}
