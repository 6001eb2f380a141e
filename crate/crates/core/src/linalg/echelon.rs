use super::{Rational, RatVector};

/// Incremental reduced row-echelon form.
///
/// Rows are kept fully reduced (every pivot column is zero in every other
/// row), so reducing a vector is one pass over the rows in any order. When
/// tracking is on, each row also carries its expression in terms of the
/// independent vectors inserted so far, which yields coordinates of
/// dependent vectors in the basis of inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<Row>,
    pivot_row: Vec<Option<usize>>,
    tracked: Option<usize>,
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    values: RatVector,
    support: Vec<usize>,
    combo: RatVector,
}

/// Outcome of [`Echelon::insert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// The vector was independent and extended the span; it is the `k`-th
    /// independent vector inserted.
    Added(usize),
    /// The vector lay in the span. With tracking on, carries its
    /// coefficients over the independent vectors inserted so far.
    Dependent(Option<RatVector>),
}

fn support_of(v: &[Rational]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon { len, rows: Vec::new(), pivot_row: vec![None; len], tracked: None }
    }

    /// Like [`Echelon::new`] but records how each row was built.
    pub fn tracking(len: usize) -> Self {
        Echelon { tracked: Some(0), ..Self::new(len) }
    }

    /// Length of the vectors stored.
    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Reduces `v` in place against the current rows; returns the
    /// accumulated coefficients when tracking.
    fn reduce(&self, v: &mut RatVector) -> Option<RatVector> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut coeffs = self.tracked.map(|k| vec![Rational::zero(); k]);
        for row in &self.rows {
            let c = v[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for &j in &row.support {
                let t = &row.values[j] * &c;
                v[j] = &v[j] - &t;
            }
            if let Some(coeffs) = coeffs.as_mut() {
                for (k, w) in row.combo.iter().enumerate() {
                    if !w.is_zero() {
                        coeffs[k] = &coeffs[k] + &(w * &c);
                    }
                }
            }
        }
        coeffs
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Rational::is_zero)
    }

    pub fn insert(&mut self, mut v: RatVector) -> Insertion {
        let coeffs = self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return Insertion::Dependent(coeffs);
        };
        let lead = v[pivot].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &lead;
            }
        }
        let index = self.tracked.unwrap_or(self.rows.len());
        let combo = match (self.tracked.as_mut(), coeffs) {
            (Some(k), Some(coeffs)) => {
                *k += 1;
                let mut combo: RatVector = coeffs.iter().map(|c| -&(c * &lead)).collect();
                combo.push(lead.clone());
                for row in &mut self.rows {
                    row.combo.push(Rational::zero());
                }
                combo
            }
            _ => Vec::new(),
        };
        let support = support_of(&v);

        for row in &mut self.rows {
            let c = row.values[pivot].clone();
            if c.is_zero() {
                continue;
            }
            for &j in &support {
                let t = &v[j] * &c;
                row.values[j] = &row.values[j] - &t;
            }
            for (k, w) in combo.iter().enumerate() {
                if !w.is_zero() {
                    row.combo[k] = &row.combo[k] - &(w * &c);
                }
            }
            row.support = support_of(&row.values);
        }

        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(Row { pivot, values: v, support, combo });
        Insertion::Added(index)
    }

    /// The row added by the latest successful insertion, as it was stored
    /// then: the inserted vector reduced against the earlier rows and scaled
    /// to a unit pivot. Closures queue this instead of the raw product, which
    /// spans the same space and keeps entries small.
    pub fn newest(&self) -> Option<&[Rational]> {
        self.rows.last().map(|r| r.values.as_slice())
    }

    /// Coordinates of `v` with respect to the independent vectors inserted
    /// so far (tracking only); `None` if `v` is outside the span.
    pub fn solve(&self, v: &[Rational]) -> Option<RatVector> {
        assert!(self.tracked.is_some(), "solve requires a tracking echelon");
        let mut w = v.to_vec();
        let coeffs = self.reduce(&mut w);
        if w.iter().all(Rational::is_zero) {
            coeffs
        } else {
            None
        }
    }

    /// The reduced rows sorted by pivot column.
    pub fn reduced_rows(&self) -> Vec<RatVector> {
        let mut order: Vec<&Row> = self.rows.iter().collect();
        order.sort_by_key(|r| r.pivot);
        order.into_iter().map(|r| r.values.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn tracking_recovers_coefficients() {
        let mut e = Echelon::tracking(3);
        assert_eq!(e.insert(v(&[1, 1, 0])), Insertion::Added(0));
        assert_eq!(e.insert(v(&[0, 1, 1])), Insertion::Added(1));
        // 2*(1,1,0) - 3*(0,1,1) = (2,-1,-3)
        assert_eq!(e.insert(v(&[2, -1, -3])), Insertion::Dependent(Some(v(&[2, -3]))));
        assert_eq!(e.solve(&v(&[1, 0, 0])), None);
        assert_eq!(e.insert(v(&[0, 0, 5])), Insertion::Added(2));
        assert_eq!(e.solve(&v(&[1, 0, 0])), Some(vec![Rational::new(1, 1), Rational::new(-1, 1), Rational::new(1, 5)]));
    }

    #[test]
    fn rows_are_fully_reduced() {
        let mut e = Echelon::new(3);
        e.insert(v(&[0, 2, 4]));
        e.insert(v(&[1, 1, 1]));
        let rows = e.reduced_rows();
        assert_eq!(rows, vec![v(&[1, 0, -1]), v(&[0, 1, 2])]);
    }
}
