use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a tree: {0}")]
    NotATree(crate::graph::TreeWitness),
    #[error("size guard: n = {n} exceeds cap {cap}")]
    SizeGuard { n: usize, cap: usize },
    #[error("gave up after {attempts} rejected samples")]
    GiveUp { attempts: usize },
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
