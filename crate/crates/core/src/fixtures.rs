//! Small named trees shared by unit tests.

use crate::graph::RootedTree;

/// Root 0; children 1, 2; children(1) = {3, 4}; children(2) = {5}.
pub fn t6() -> RootedTree {
    RootedTree::from_parents(&[0, 0, 1, 1, 2]).unwrap()
}

/// Star with `leaves` leaves rooted at its centre 0.
pub fn star(leaves: usize) -> RootedTree {
    RootedTree::from_parents(&vec![0; leaves]).unwrap()
}

/// Path 0–1–…–(n−1) rooted at the end 0.
pub fn path(n: usize) -> RootedTree {
    RootedTree::from_parents(&(0..n.saturating_sub(1)).collect::<Vec<_>>()).unwrap()
}
