use std::fmt;
use std::ops::{Index, IndexMut};

use super::Rational;

/// A rational vector. Dense; closures over `n²` coordinates stay small at
/// the sizes the algebra cap allows.
pub type RatVector = Vec<Rational>;

pub fn zero_vector(len: usize) -> RatVector {
    vec![Rational::zero(); len]
}

pub fn unit_vector(len: usize, at: usize) -> RatVector {
    let mut v = zero_vector(len);
    v[at] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| &acc + &(x * y))
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

/// Dense exact matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Diagonal 0/1 matrix selecting `indices`.
    pub fn diagonal_projector(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in indices {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        RatMatrix { rows, cols, entries: values.iter().map(|&v| Rational::from_integer(v)).collect() }
    }

    /// Reassembles an `n × n` matrix from its row-major `n²`-vector.
    pub fn from_flat(n: usize, flat: RatVector) -> Self {
        assert_eq!(flat.len(), n * n);
        RatMatrix { rows: n, cols: n, entries: flat }
    }

    /// Row-major entries with an explicit shape.
    pub fn from_flat_shape(rows: usize, cols: usize, flat: RatVector) -> Self {
        assert_eq!(flat.len(), rows * cols);
        RatMatrix { rows, cols, entries: flat }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Row-major flattening, the coordinates used for algebra closures.
    pub fn as_flat(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| &acc + &self[(i, i)])
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = if a.is_one() { b.clone() } else { a * b };
                    let cell = &mut out.entries[i * rhs.cols + j];
                    *cell = &*cell + &prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    fn zip_with(&self, rhs: &RatMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        super::row_basis((0..self.rows).map(|i| self.row(i).to_vec())).dim()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = RatMatrix::from_i64(2, 3, &[1, 2, 0, 0, 1, 1]);
        let b = RatMatrix::from_i64(3, 2, &[1, 0, 0, 1, 1, 1]);
        assert_eq!(a.mul(&b), RatMatrix::from_i64(2, 2, &[1, 2, 1, 2]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(&b).trace(), Rational::from_integer(3));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = RatMatrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 0, 1, 1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(RatMatrix::identity(4).rank(), 4);
        assert_eq!(RatMatrix::zeros(3, 2).rank(), 0);
    }

    #[test]
    fn projector_is_idempotent() {
        let p = RatMatrix::diagonal_projector(4, [1, 3]);
        assert_eq!(p.mul(&p), p);
        assert!(p.is_diagonal());
    }
}
