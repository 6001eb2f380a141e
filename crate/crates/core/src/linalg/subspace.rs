use std::collections::VecDeque;

use super::{Echelon, Insertion, RatMatrix, RatVector, Rational};
use crate::error::{Error, Result};

/// A subspace of `Q^ambient_dim`, stored as its reduced row-echelon basis.
///
/// The RREF of a subspace is unique, so two `SubspaceBasis` values are equal
/// exactly when they describe the same subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: Vec<RatVector>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        row_basis((0..ambient_dim).map(|i| super::unit_vector(ambient_dim, i)))
    }

    pub(crate) fn from_echelon(e: &Echelon) -> Self {
        let basis = e.reduced_rows();
        let pivots = basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero"))
            .collect();
        SubspaceBasis { ambient_dim: e.ambient_dim(), basis, pivots }
    }

    /// Rows already in reduced echelon form, in any order.
    pub(crate) fn from_reduced_rows(ambient_dim: usize, rows: Vec<RatVector>) -> Self {
        let mut keyed: Vec<(usize, RatVector)> = rows
            .into_iter()
            .map(|r| (r.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero"), r))
            .collect();
        keyed.sort_by_key(|(p, _)| *p);
        let (pivots, basis) = keyed.into_iter().unzip();
        SubspaceBasis { ambient_dim, basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.ambient_dim);
        for row in &self.basis {
            e.insert(row.clone());
        }
        e
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the
    /// subspace. Reading the pivot entries gives the only candidate; the
    /// reconstruction check makes membership exact.
    pub fn coordinates(&self, v: &[Rational]) -> Option<RatVector> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let coords: RatVector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = super::zero_vector(self.ambient_dim);
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in rebuilt.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r = &*r + &(x * c);
                }
            }
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }

    /// Matrix of `op` restricted to this subspace, in the RREF basis:
    /// column `j` holds the coordinates of `op · basis[j]`.
    pub fn restrict(&self, op: &RatMatrix) -> Result<RatMatrix> {
        let d = self.dim();
        let mut out = RatMatrix::zeros(d, d);
        for (j, b) in self.basis.iter().enumerate() {
            let image = op.mul_vec(b);
            let coords = self.coordinates(&image).ok_or(Error::NotInvariant)?;
            for (i, c) in coords.into_iter().enumerate() {
                out[(i, j)] = c;
            }
        }
        Ok(out)
    }

    /// Gram matrix of the basis under the standard inner product.
    pub fn gram(&self) -> RatMatrix {
        let d = self.dim();
        let mut g = RatMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let x = super::dot(&self.basis[i], &self.basis[j]);
                g[(j, i)] = x.clone();
                g[(i, j)] = x;
            }
        }
        g
    }
}

/// RREF basis of the span of `vectors`.
pub fn row_basis(vectors: impl IntoIterator<Item = RatVector>) -> SubspaceBasis {
    let mut iter = vectors.into_iter().peekable();
    let len = iter.peek().map_or(0, Vec::len);
    let mut e = Echelon::new(len);
    for v in iter {
        if e.is_full() {
            break;
        }
        e.insert(v);
    }
    SubspaceBasis::from_echelon(&e)
}

/// Smallest subspace containing `seeds` and invariant under every operator.
///
/// Worklist closure: each new direction is pushed through every operator
/// once. The result is then checked for invariance directly, and the loop
/// resumes from the images in the (unexpected) case that the check fails.
pub fn span_closure(ambient_dim: usize, seeds: &[RatVector], operators: &[RatMatrix]) -> SubspaceBasis {
    for op in operators {
        assert!(op.is_square() && op.rows() == ambient_dim, "operator shape mismatch");
    }
    let mut pending: Vec<RatVector> = seeds.to_vec();
    loop {
        let mut e = Echelon::new(ambient_dim);
        let mut queue: VecDeque<RatVector> = VecDeque::new();
        for s in pending.drain(..) {
            if let Insertion::Added(_) = e.insert(s) {
                queue.push_back(e.newest().expect("just added").to_vec());
            }
        }
        while let Some(v) = queue.pop_front() {
            for op in operators {
                if e.is_full() {
                    break;
                }
                if let Insertion::Added(_) = e.insert(op.mul_vec(&v)) {
                    queue.push_back(e.newest().expect("just added").to_vec());
                }
            }
        }
        let current = SubspaceBasis::from_echelon(&e);
        for b in current.basis() {
            pending.extend(operators.iter().map(|op| op.mul_vec(b)).filter(|w| !current.contains(w)));
        }
        if pending.is_empty() {
            return current;
        }
        pending.extend(current.basis().iter().cloned());
    }
}

pub fn equal_subspace(a: &SubspaceBasis, b: &SubspaceBasis) -> bool {
    assert_eq!(a.ambient_dim, b.ambient_dim, "ambient dimension mismatch");
    a == b
}
