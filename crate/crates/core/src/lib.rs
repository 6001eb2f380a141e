//! Terwilliger algebras `T(x₀) = ⟨A, E*_0, …, E*_D⟩` of rooted trees and
//! graphs, computed in exact rational arithmetic.
//!
//! The crate builds the level decomposition of a rooted graph, the algebra
//! and its principal module `W₀ = T x₀`, the level classes `X_i(α)` of a
//! rooted tree, the orbits of its automorphism group, and canonical
//! certificates for rooted-tree isomorphism. Brute-force oracles for
//! automorphisms and isomorphism live next to the fast paths.

pub mod error;
pub mod graph;
pub mod iso_cert;
pub mod linalg;
pub mod orbits;
pub mod refinement;
pub mod report;
pub mod scan;
pub mod talgebra;

#[cfg(test)]
mod fixtures;

pub use error::{Error, Result};
pub use graph::{as_tree, bfs_levels, parse_edge_list, parse_parent_array, Graph, RootedGraph, RootedTree};
pub use linalg::DEFAULT_CAP;
