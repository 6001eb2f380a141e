//! Exact rational linear algebra: dense matrices, reduced row-echelon
//! subspaces and the two closure engines (invariant subspace, generated
//! algebra).

mod algebra;
mod echelon;
mod matrix;
mod rational;
mod subspace;

pub use algebra::{algebra_closure, block_algebra_closure, commutant_dim, AlgebraBasis, DEFAULT_CAP};
pub use echelon::{Echelon, Insertion};
pub use matrix::{dot, is_zero_vector, unit_vector, zero_vector, RatMatrix, RatVector};
pub use rational::Rational;
pub use subspace::{equal_subspace, row_basis, span_closure, SubspaceBasis};
