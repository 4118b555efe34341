//! Hellinger (Matsusita) distance between discrete distributions.
//!
//! `M(p, q) = { 1/2 * sum_x (sqrt p(x) - sqrt q(x))^2 }^(1/2)`, which lies in
//! `[0, 1]`. Joint tables are compared cell by cell in row-major order.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A univariate distribution, or a joint table flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatDistribution<T> {
    probs: Vec<T>,
}

impl<T: Scalar> FlatDistribution<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < T::zero() {
                return Err(Error::InvalidEntry {
                    row: 0,
                    col: i,
                    value: p.to_f64_lossy(),
                });
            }
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::sum_tolerance() {
            return Err(Error::NotNormalized(total.to_f64_lossy()));
        }
        Ok(Self { probs })
    }

    /// Point mass at `index` on `len` outcomes.
    pub fn vertex(len: usize, index: usize) -> Self {
        assert!(index < len, "vertex index out of range");
        let mut probs = vec![T::zero(); len];
        probs[index] = T::one();
        Self { probs }
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        let p = T::one() / T::from_usize(len).expect("length fits scalar");
        Self {
            probs: vec![p; len],
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<T> {
        self.probs
    }
}

impl<T> AsRef<[T]> for FlatDistribution<T> {
    fn as_ref(&self) -> &[T] {
        &self.probs
    }
}

/// Hellinger distance between two distributions over the same outcomes.
///
/// Accepts anything viewable as a probability slice, including
/// [`FlatDistribution`] and [`crate::JointTable`].
pub fn hellinger<T, P, Q>(p: &P, q: &Q) -> Result<T>
where
    T: Scalar,
    P: AsRef<[T]> + ?Sized,
    Q: AsRef<[T]> + ?Sized,
{
    let (p, q) = (p.as_ref(), q.as_ref());
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(hellinger_unchecked(p, q))
}

pub(crate) fn hellinger_unchecked<T: Scalar>(p: &[T], q: &[T]) -> T {
    let half = T::from_f64_lossy(0.5);
    let sum: T = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    // rounding can push the sum a hair above 2 for disjoint supports
    (half * sum).sqrt().min(T::one())
}

/// The distribution farthest from `p` in Hellinger distance, together with
/// that distance.
///
/// For strictly positive `p` the maximizer is the point mass on the
/// smallest entry of `p` and the distance is `sqrt(1 - sqrt(min p))`.
/// Ties between equal minima go to the lowest index; every tied vertex
/// attains the same distance.
pub fn max_distanced<T: Scalar>(p: &FlatDistribution<T>) -> Result<(FlatDistribution<T>, T)> {
    let probs = p.as_slice();
    if let Some(i) = probs.iter().position(|&v| v <= T::zero()) {
        return Err(Error::NotPositive(i));
    }
    let (argmin, min) = probs
        .iter()
        .copied()
        .enumerate()
        .fold((0, T::infinity()), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    let distance = (T::one() - min.sqrt()).sqrt();
    Ok((FlatDistribution::vertex(probs.len(), argmin), distance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::JointTable;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn flat(v: &[f64]) -> FlatDistribution<f64> {
        FlatDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_and_disjoint() {
        let p = flat(&[0.1, 0.2, 0.7]);
        assert_eq!(hellinger(&p, &p).unwrap(), 0.0);
        let a = FlatDistribution::<f64>::vertex(3, 0);
        let b = FlatDistribution::<f64>::vertex(3, 1);
        assert_eq!(hellinger(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn example1_numerator() {
        let p = JointTable::from_probs(&[vec![0.3, 0.2], vec![0.1, 0.4]]).unwrap();
        let d = hellinger(&p.independence_product(), &p).unwrap();
        // direct evaluation: sqrt(0.5 * sum (sqrt a - sqrt b)^2)
        assert_abs_diff_eq!(d, 0.149_233_152_122_038_28, epsilon = 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            hellinger(&[0.5, 0.5][..], &[1.0][..]),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn max_distanced_closed_form() {
        let (v, d) = max_distanced(&flat(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(d, 0.826_905_214_630_529_5, epsilon = 1e-12);

        let (v, d) = max_distanced(&FlatDistribution::<f64>::uniform(4)).unwrap();
        assert_eq!(v.as_slice()[0], 1.0);
        assert_abs_diff_eq!(d, 0.5f64.sqrt(), epsilon = 1e-12);

        let (v, d) = max_distanced(&flat(&[0.5, 0.5])).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 0.0]);
        assert_abs_diff_eq!(d, 0.541_196_100_146_197, epsilon = 1e-12);
    }

    #[test]
    fn max_distanced_requires_positive() {
        assert_eq!(
            max_distanced(&flat(&[0.5, 0.0, 0.5])),
            Err(Error::NotPositive(1))
        );
    }

    #[test]
    fn tied_minima_give_same_distance() {
        let p = flat(&[0.3, 0.2, 0.3, 0.2]);
        let (v, d) = max_distanced(&p).unwrap();
        assert_eq!(v.as_slice(), &[0.0, 1.0, 0.0, 0.0]);
        let other = FlatDistribution::vertex(4, 3);
        assert_abs_diff_eq!(hellinger(&p, &other).unwrap(), d, epsilon = 1e-15);
    }

    fn simplex(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, len).prop_filter_map("nonzero", |v| {
            let s: f64 = v.iter().sum();
            (s > 1e-9).then(|| v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn range_and_symmetry((p, q) in (2usize..10).prop_flat_map(|n| (simplex(n), simplex(n)))) {
            let d = hellinger(&p, &q).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert_eq!(d, hellinger(&q, &p).unwrap());
        }

        #[test]
        fn permutation_invariant((p, q, perm) in (2usize..8).prop_flat_map(|n| {
            (simplex(n), simplex(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })) {
            let pp: Vec<f64> = perm.iter().map(|&i| p[i]).collect();
            let qp: Vec<f64> = perm.iter().map(|&i| q[i]).collect();
            let a = hellinger(&p, &q).unwrap();
            let b = hellinger(&pp, &qp).unwrap();
            prop_assert!((a - b).abs() <= 1e-15);
        }

        #[test]
        fn triangle((p, q, r) in (2usize..8).prop_flat_map(|n| (simplex(n), simplex(n), simplex(n)))) {
            let pr = hellinger(&p, &r).unwrap();
            let pq = hellinger(&p, &q).unwrap();
            let qr = hellinger(&q, &r).unwrap();
            prop_assert!(pr <= pq + qr + 1e-12);
        }

        #[test]
        fn max_distanced_bounds_everything((p, q) in (2usize..8).prop_flat_map(|n| (simplex(n), simplex(n)))) {
            prop_assume!(p.iter().all(|&x| x > 0.0));
            let (v, d) = max_distanced(&FlatDistribution::new(p.clone()).unwrap()).unwrap();
            prop_assert_eq!(v.as_slice().iter().filter(|&&x| x == 1.0).count(), 1);
            prop_assert!(d < 1.0);
            prop_assert!(hellinger(&p, &q).unwrap() <= d + 1e-12);
        }
    }
}
