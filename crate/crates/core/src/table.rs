//! Discrete bivariate joint probability tables.
//!
//! A [`JointTable`] is an `n x m` matrix of nonnegative cell probabilities
//! summing to one, stored row-major. Tables built from user input reject
//! empty rows and columns; derived full-dependence tables (see
//! [`crate::dependence`]) may leave columns empty and are built through a
//! crate-private path.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct JointTable<T> {
    rows: usize,
    cols: usize,
    probs: Vec<T>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

/// Row (X) and column (Y) marginals of a joint table.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalPair<T> {
    pub row: Vec<T>,
    pub col: Vec<T>,
}

/// Joint table of three discrete variables `(X, Y, Z)`, indexed `[x][y][z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriTable<T> {
    dims: (usize, usize, usize),
    probs: Vec<T>,
}

fn flatten<T: Scalar>(matrix: &[Vec<T>]) -> Result<(usize, usize, Vec<T>)> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if rows < 2 || cols < 2 {
        return Err(Error::TooSmall { rows, cols });
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Ragged {
                row: i,
                len: row.len(),
                expected: cols,
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidEntry {
                    row: i,
                    col: j,
                    value: v.to_f64_lossy(),
                });
            }
            flat.push(v);
        }
    }
    Ok((rows, cols, flat))
}

/// Scales `values` to sum to one, then folds any floating point residual
/// into the largest entry, aiming for a sequential sum of exactly `1`.
///
/// A vector whose sum is already within summation rounding of one
/// (`max(len, 16)` machine epsilons) is left untouched. The fold cannot
/// always land on exactly `1` (the largest entry's ulp may straddle the
/// residual), so this slack is what makes the operation idempotent.
pub(crate) fn normalize<T: Scalar>(values: &mut [T]) {
    let slack = T::epsilon() * T::from_usize(values.len().max(16)).expect("length fits");
    let total: T = values.iter().copied().sum();
    if (total - T::one()).abs() <= slack {
        return;
    }
    for v in values.iter_mut() {
        *v = *v / total;
    }
    for _ in 0..4 {
        let total: T = values.iter().copied().sum();
        if total == T::one() {
            break;
        }
        let (idx, _) = values
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
        values[idx] = values[idx] + (T::one() - total);
    }
}

impl<T: Scalar> JointTable<T> {
    /// Builds a table from nonnegative counts (integers or reals), dividing
    /// by the grand total.
    pub fn from_counts(counts: &[Vec<T>]) -> Result<Self> {
        let (rows, cols, mut probs) = flatten(counts)?;
        let total: T = probs.iter().copied().sum();
        if total <= T::zero() {
            return Err(Error::ZeroTotal);
        }
        normalize(&mut probs);
        Self::checked(rows, cols, probs)
    }

    /// Builds a table from probabilities that must already sum to one
    /// within [`Scalar::sum_tolerance`].
    pub fn from_probs(probs: &[Vec<T>]) -> Result<Self> {
        let (rows, cols, mut flat) = flatten(probs)?;
        let total: T = flat.iter().copied().sum();
        if (total - T::one()).abs() > T::sum_tolerance() {
            return Err(Error::NotNormalized(total.to_f64_lossy()));
        }
        normalize(&mut flat);
        Self::checked(rows, cols, flat)
    }

    fn checked(rows: usize, cols: usize, probs: Vec<T>) -> Result<Self> {
        let table = Self::from_raw(rows, cols, probs);
        let m = table.marginals();
        if let Some(i) = m.row.iter().position(|&v| v <= T::zero()) {
            return Err(Error::ZeroRow(i));
        }
        if let Some(j) = m.col.iter().position(|&v| v <= T::zero()) {
            return Err(Error::ZeroColumn(j));
        }
        Ok(table)
    }

    /// No validation: used for derived tables (products, full dependences).
    pub(crate) fn from_raw(rows: usize, cols: usize, probs: Vec<T>) -> Self {
        debug_assert_eq!(rows * cols, probs.len());
        Self {
            rows,
            cols,
            probs,
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn with_labels(
        mut self,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(l) = &row_labels {
            if l.len() != self.rows {
                return Err(Error::LengthMismatch {
                    left: l.len(),
                    right: self.rows,
                });
            }
        }
        if let Some(l) = &col_labels {
            if l.len() != self.cols {
                return Err(Error::LengthMismatch {
                    left: l.len(),
                    right: self.cols,
                });
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.probs[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.probs[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = T> + '_ {
        (0..self.rows).map(move |i| self.get(i, col))
    }

    /// Cell probabilities in row-major order.
    pub fn as_slice(&self) -> &[T] {
        &self.probs
    }

    pub fn to_nested(&self) -> Vec<Vec<T>> {
        self.probs.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn marginals(&self) -> MarginalPair<T> {
        let row = (0..self.rows)
            .map(|i| self.row(i).iter().copied().sum())
            .collect();
        let col = (0..self.cols).map(|j| self.column(j).sum()).collect();
        MarginalPair { row, col }
    }

    /// `P^I`: the table with the same marginals under independence.
    pub fn independence_product(&self) -> Self {
        let MarginalPair { row, col } = self.marginals();
        let probs = row
            .iter()
            .flat_map(|&r| col.iter().map(move |&c| r * c))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            probs,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        let probs = (0..self.cols)
            .flat_map(|j| self.column(j).collect::<Vec<_>>())
            .collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            probs,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Reorders states: row `i` of the result is row `row_perm[i]` of `self`,
    /// and likewise for columns.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        check_permutation(row_perm, self.rows)?;
        check_permutation(col_perm, self.cols)?;
        let probs = row_perm
            .iter()
            .flat_map(|&i| col_perm.iter().map(move |&j| self.get(i, j)))
            .collect();
        let pick = |labels: &Option<Vec<String>>, perm: &[usize]| {
            labels
                .as_ref()
                .map(|l| perm.iter().map(|&k| l[k].clone()).collect())
        };
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            probs,
            row_labels: pick(&self.row_labels, row_perm),
            col_labels: pick(&self.col_labels, col_perm),
        })
    }

    /// Whether the table equals its independence product entrywise within `tol`.
    pub fn is_independent(&self, tol: T) -> bool {
        let indep = self.independence_product();
        self.probs
            .iter()
            .zip(indep.as_slice())
            .all(|(&a, &b)| (a - b).abs() <= tol)
    }
}

impl<T> AsRef<[T]> for JointTable<T> {
    fn as_ref(&self) -> &[T] {
        &self.probs
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::LengthMismatch {
            left: perm.len(),
            right: n,
        });
    }
    let mut seen = vec![false; n];
    for &k in perm {
        if k >= n || std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

impl<T: Scalar> TriTable<T> {
    pub fn from_probs(probs: &[Vec<Vec<T>>]) -> Result<Self> {
        let n = probs.len();
        let m = probs.first().map_or(0, Vec::len);
        let k = probs
            .first()
            .and_then(|p| p.first())
            .map_or(0, Vec::len);
        if n == 0 || m == 0 || k == 0 {
            return Err(Error::InvalidArgument("empty three-way table".into()));
        }
        let mut flat = Vec::with_capacity(n * m * k);
        for (x, plane) in probs.iter().enumerate() {
            if plane.len() != m {
                return Err(Error::Ragged {
                    row: x,
                    len: plane.len(),
                    expected: m,
                });
            }
            for (y, line) in plane.iter().enumerate() {
                if line.len() != k {
                    return Err(Error::Ragged {
                        row: x * m + y,
                        len: line.len(),
                        expected: k,
                    });
                }
                for &v in line {
                    if !v.is_finite() || v < T::zero() {
                        return Err(Error::InvalidEntry {
                            row: x,
                            col: y,
                            value: v.to_f64_lossy(),
                        });
                    }
                    flat.push(v);
                }
            }
        }
        let total: T = flat.iter().copied().sum();
        if (total - T::one()).abs() > T::sum_tolerance() {
            return Err(Error::NotNormalized(total.to_f64_lossy()));
        }
        normalize(&mut flat);
        Ok(Self {
            dims: (n, m, k),
            probs: flat,
        })
    }

    /// `P(x, y) * Q(z)`: `Z` independent of `(X, Y)`.
    pub fn product(joint: &JointTable<T>, z: &[T]) -> Result<Self> {
        let nested: Vec<Vec<Vec<T>>> = (0..joint.rows())
            .map(|x| {
                joint
                    .row(x)
                    .iter()
                    .map(|&p| z.iter().map(|&q| p * q).collect())
                    .collect()
            })
            .collect();
        Self::from_probs(&nested)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> T {
        let (_, m, k) = self.dims;
        self.probs[(x * m + y) * k + z]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn example1() -> JointTable<f64> {
        JointTable::from_probs(&[vec![0.3, 0.2], vec![0.1, 0.4]]).unwrap()
    }

    fn example2() -> JointTable<f64> {
        JointTable::from_probs(&[
            vec![0.05, 0.03, 0.20],
            vec![0.30, 0.07, 0.05],
            vec![0.04, 0.20, 0.06],
        ])
        .unwrap()
    }

    #[test]
    fn counts_normalize() {
        let t = JointTable::from_counts(&[vec![30.0, 20.0], vec![10.0, 40.0]]).unwrap();
        let expected = [0.3, 0.2, 0.1, 0.4];
        for (a, b) in t.as_slice().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_small_and_degenerate() {
        assert_eq!(
            JointTable::from_counts(&[vec![1.0]]),
            Err(Error::TooSmall { rows: 1, cols: 1 })
        );
        assert_eq!(
            JointTable::from_counts(&[vec![1.0, 0.0], vec![0.0, 0.0]]),
            Err(Error::ZeroRow(1))
        );
        assert_eq!(
            JointTable::from_counts(&[vec![0.0, 0.0], vec![0.0, 0.0]]),
            Err(Error::ZeroTotal)
        );
        assert!(matches!(
            JointTable::from_counts(&[vec![1.0, -1.0], vec![1.0, 1.0]]),
            Err(Error::InvalidEntry { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            JointTable::from_probs(&[vec![0.5, 0.2], vec![0.1, 0.1]]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            JointTable::from_counts(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::Ragged { row: 1, .. })
        ));
    }

    #[test]
    fn zero_column_rejected() {
        assert_eq!(
            JointTable::from_counts(&[vec![1.0, 0.0], vec![2.0, 0.0]]),
            Err(Error::ZeroColumn(1))
        );
    }

    #[test]
    fn marginals_of_examples() {
        let m = example2().marginals();
        for (a, b) in m.row.iter().zip([0.28, 0.42, 0.30]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        for (a, b) in m.col.iter().zip([0.39, 0.30, 0.31]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }

        let m = example1().marginals();
        assert_abs_diff_eq!(m.row[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.col[1], 0.6, epsilon = 1e-12);

        let u = JointTable::from_probs(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        assert_eq!(
            u.marginals(),
            MarginalPair {
                row: vec![0.5, 0.5],
                col: vec![0.5, 0.5]
            }
        );
    }

    #[test]
    fn independence_product_examples() {
        let pi = example2().independence_product();
        let printed = [
            0.1092, 0.084, 0.0868, 0.1638, 0.126, 0.1302, 0.1170, 0.090, 0.0930,
        ];
        for (a, b) in pi.as_slice().iter().zip(printed) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let pi = example1().independence_product();
        for (a, b) in pi.as_slice().iter().zip([0.2, 0.3, 0.2, 0.3]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_table_is_fixed_point() {
        let a = [0.2, 0.3, 0.5];
        let b = [0.6, 0.4];
        let nested: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect();
        let q = JointTable::from_probs(&nested).unwrap();
        let qi = q.independence_product();
        for (x, y) in q.as_slice().iter().zip(qi.as_slice()) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-15);
        }
        assert!(q.is_independent(1e-12));
    }

    #[test]
    fn transpose_example() {
        let t = example1().transpose();
        assert_eq!(t.to_nested(), vec![vec![0.3, 0.1], vec![0.2, 0.4]]);
        assert_eq!(t.transpose(), example1());
    }

    #[test]
    fn transpose_swaps_labels_and_marginals() {
        let t = example2()
            .with_labels(
                Some(vec!["a".into(), "b".into(), "c".into()]),
                Some(vec!["x".into(), "y".into(), "z".into()]),
            )
            .unwrap();
        let tt = t.transpose();
        assert_eq!(tt.row_labels(), t.col_labels());
        let (m, mt) = (t.marginals(), tt.marginals());
        assert_eq!(m.row, mt.col);
        assert_eq!(m.col, mt.row);
    }

    #[test]
    fn normalized_table_sums_to_exactly_one() {
        let t = JointTable::from_counts(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 2.0]]).unwrap();
        let s: f64 = t.as_slice().iter().sum();
        assert_eq!(s, 1.0);
        let again = JointTable::from_probs(&t.to_nested()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn renormalizing_is_idempotent_when_the_fold_misses() {
        // sums to one ulp above 1; the residual is below half an ulp of the
        // largest entry, so folding cannot reach exactly one
        let rows = vec![
            vec![0.080101120357853, 0.5410616143688692],
            vec![0.22041544039483713, 0.15842182487844073],
        ];
        let t = JointTable::from_probs(&rows).unwrap();
        assert_eq!(t.to_nested(), rows);
        assert_eq!(JointTable::from_probs(&t.to_nested()).unwrap(), t);
    }

    #[test]
    fn permute_reorders() {
        let p = example1().permute(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(p.to_nested(), vec![vec![0.1, 0.4], vec![0.3, 0.2]]);
        assert!(example1().permute(&[0, 0], &[0, 1]).is_err());
    }

    #[test]
    fn tri_table_product() {
        let t = TriTable::product(&example1(), &[0.5, 0.5]).unwrap();
        assert_eq!(t.dims(), (2, 2, 2));
        assert_abs_diff_eq!(t.get(1, 1, 0), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn f32_tables_work() {
        let t = JointTable::<f32>::from_counts(&[vec![3.0, 2.0], vec![1.0, 4.0]]).unwrap();
        assert!((t.marginals().row[0] - 0.5).abs() < 1e-6);
    }
}
