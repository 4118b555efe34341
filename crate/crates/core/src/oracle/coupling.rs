use serde_json::json;

use super::OracleReport;
use crate::error::{Error, Result};
use crate::table::JointTable;

/// Largest state count enumerated exhaustively (8! couplings).
pub const MAX_COUPLING_STATES: usize = 8;

/// A one-to-one coupling: state `i` of X is paired with state
/// `permutation[i]` of Y and carries `mass[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    permutation: Vec<usize>,
    mass: Vec<f64>,
}

impl Coupling {
    pub fn new(permutation: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        let n = permutation.len();
        if mass.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: mass.len(),
            });
        }
        let mut seen = vec![false; n];
        for &k in &permutation {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidArgument(format!(
                    "{permutation:?} is not a bijection"
                )));
            }
        }
        if let Some(i) = mass.iter().position(|&m| !(m > 0.0)) {
            return Err(Error::NotPositive(i));
        }
        Ok(Self { permutation, mass })
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// `E{XY} = sum_i a_i b_{f(i)} m_i`, with `mass` normalized.
    pub fn expected_product(&self, a: &[f64], b: &[f64]) -> f64 {
        let total: f64 = self.mass.iter().sum();
        self.permutation
            .iter()
            .zip(&self.mass)
            .enumerate()
            .map(|(i, (&j, &m))| a[i] * b[j] * m / total)
            .sum()
    }

    /// The induced table: one nonzero cell per row and per column.
    pub fn table(&self) -> Result<JointTable<f64>> {
        let n = self.permutation.len();
        let mut rows = vec![vec![0.0; n]; n];
        for (i, &j) in self.permutation.iter().enumerate() {
            rows[i][j] = self.mass[i];
        }
        JointTable::from_counts(&rows)
    }
}

/// Lexicographic successor; false once the last permutation is reached.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exhaustively checks covariance maximality over one-to-one couplings.
///
/// Enumerates all `n!` couplings of `support_x` and `support_y` carrying
/// `mass` (placed on X's states) and compares `E{XY}`:
///
/// * the coupling that pairs X states in increasing order of
///   `a_i * m_i` with Y states in increasing order must attain the maximum,
///   and the reverse pairing the minimum (rearrangement inequality);
/// * for uniform mass that coupling is the identity, i.e. Y strictly
///   increasing in X, so the identity must then be maximal.
///
/// Whether the identity is maximal for the given (possibly unequal) mass
/// is recorded as `identity_maximal`; it is informational only, since with
/// unequal masses the identity need not be the maximizer.
pub fn verify_cov_max(support_x: &[f64], support_y: &[f64], mass: &[f64]) -> Result<OracleReport> {
    let n = support_x.len();
    if n > MAX_COUPLING_STATES {
        return Err(Error::InvalidArgument(format!(
            "exhaustive enumeration supports at most {MAX_COUPLING_STATES} states, got {n}"
        )));
    }
    if support_y.len() != n || mass.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: if support_y.len() != n { support_y.len() } else { mass.len() },
        });
    }
    for s in [support_x, support_y] {
        if let Some(k) = s.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::SupportNotIncreasing(k + 1));
        }
    }

    let mut best = f64::MIN;
    let mut worst = f64::MAX;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    loop {
        let v = Coupling::new(perm.clone(), mass.to_vec())?.expected_product(support_x, support_y);
        best = best.max(v);
        worst = worst.min(v);
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let mut by_weight: Vec<usize> = (0..n).collect();
    by_weight.sort_by(|&i, &j| (support_x[i] * mass[i]).total_cmp(&(support_x[j] * mass[j])));
    let mut sorted = vec![0; n];
    let mut reversed = vec![0; n];
    for (rank, &i) in by_weight.iter().enumerate() {
        sorted[i] = rank;
        reversed[i] = n - 1 - rank;
    }
    let value = |p: &[usize]| -> Result<f64> {
        Ok(Coupling::new(p.to_vec(), mass.to_vec())?.expected_product(support_x, support_y))
    };
    let sorted_value = value(&sorted)?;
    let reversed_value = value(&reversed)?;
    let identity: Vec<usize> = (0..n).collect();
    let identity_value = value(&identity)?;

    let scale = best.abs().max(worst.abs()).max(1.0);
    let tol = 1e-12 * scale;
    let uniform = mass.windows(2).all(|w| w[0] == w[1]);

    let mut report = OracleReport::new("cov-max");
    report.trials = count;
    report.record("max_expected_product", best);
    report.record("min_expected_product", worst);
    report.record("sorted_coupling", &sorted);
    report.record("identity_expected_product", identity_value);
    report.record("identity_maximal", identity_value >= best - tol);
    report.record("uniform_mass", uniform);

    let witness = || json!({ "support_x": support_x, "support_y": support_y, "mass": mass });
    report.observe(sorted_value - best, tol, witness);
    report.observe(worst - reversed_value, tol, witness);
    if uniform {
        report.observe(identity_value - best, tol, witness);
    }
    Ok(report)
}
