//! Majority colorings of directed graphs.
//!
//! The crate verifies and enumerates majority colorings, builds OR gadgets
//! and finite truncations of a countable DAG with no majority 2-coloring,
//! checks the infinite graph symbolically over finitely described path
//! colorings, and experiments with weighted undirected multigraphs.

pub mod cli;
pub mod counterexample;
pub mod gadgets;
pub mod graph;
pub mod infinite;
pub mod majority;
pub mod multigraph;
pub mod random;

pub use graph::{Coloring, DiGraph, TripletLabel, VertexId};
