//! The Hellinger-normalized dependence measure `rho_M`.
//!
//! `rho_M` is the Hellinger distance from a joint table to its independence
//! product, divided by the geometric mean of the distances from the
//! independence product to every full-dependence table built by the argmax
//! rule below. Full dependences preserving the X marginal put each row's
//! whole mass on that row's largest cell; ties branch into one candidate
//! per choice.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hellinger::hellinger_unchecked;
use crate::scalar::Scalar;
use crate::table::JointTable;

/// Maximum number of full-dependence candidates enumerated per axis.
pub const DEFAULT_CANDIDATE_CAP: usize = 4096;

/// Which marginal a full-dependence candidate preserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Row marginal preserved; one nonzero per row.
    X,
    /// Column marginal preserved; one nonzero per column.
    Y,
}

/// A state whose maximum was attained more than once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieSite {
    /// Row index for [`Axis::X`], column index for [`Axis::Y`].
    pub state: usize,
    /// The tied cells along that row (or column), ascending.
    pub tied: Vec<usize>,
}

/// All full-dependence tables for one axis.
///
/// Candidates are ordered lexicographically by their tie choices, the
/// last tie site varying fastest. Candidate tables may contain empty
/// columns (axis X) or rows (axis Y).
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet<T> {
    pub axis: Axis,
    pub tables: Vec<JointTable<T>>,
    pub tie_sites: Vec<TieSite>,
}

impl<T> CandidateSet<T> {
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// Denominator convention for [`rho_m`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// Square root of the product of the per-axis geometric means.
    #[default]
    Definition1,
    /// `prod_{i,j} (M(P^Xi, P^I) * M(P^Yj, P^I))^(1 / (|P^X| + |P^Y|))`,
    /// the expanded form written out for the five-state worked example.
    /// With two candidates per axis this is the square of the
    /// [`Variant::Definition1`] denominator; with one per axis they agree.
    Example4Compat,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Definition1 => "definition1",
            Variant::Example4Compat => "example4-compat",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition1" => Ok(Variant::Definition1),
            "example4-compat" => Ok(Variant::Example4Compat),
            other => Err(Error::InvalidArgument(format!(
                "unknown rho_M variant {other:?} (expected definition1 or example4-compat)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoMResult<T> {
    pub value: T,
    /// `M(P^I, P)`.
    pub numerator: T,
    pub denominator: T,
    /// `(|P^X|, |P^Y|)`.
    pub candidate_counts: (usize, usize),
    pub variant: Variant,
    /// `M(P^I, P^X_i)` for each X candidate, in candidate order.
    pub x_distances: Vec<T>,
    /// `M(P^I, P^Y_j)` for each Y candidate, in candidate order.
    pub y_distances: Vec<T>,
}

impl<T: Scalar> RhoMResult<T> {
    /// The ratio is reported unclamped; this flags values above one.
    pub fn exceeds_one(&self) -> bool {
        self.value > T::one()
    }
}

/// Full-dependence candidates for `axis`, capped at [`DEFAULT_CANDIDATE_CAP`].
pub fn full_dep_candidates<T: Scalar>(table: &JointTable<T>, axis: Axis) -> Result<CandidateSet<T>> {
    full_dep_candidates_capped(table, axis, DEFAULT_CANDIDATE_CAP)
}

pub fn full_dep_candidates_capped<T: Scalar>(
    table: &JointTable<T>,
    axis: Axis,
    cap: usize,
) -> Result<CandidateSet<T>> {
    match axis {
        Axis::X => row_candidates(table, cap),
        Axis::Y => {
            let mut set = row_candidates(&table.transpose(), cap)?;
            set.axis = Axis::Y;
            set.tables = set.tables.iter().map(JointTable::transpose).collect();
            Ok(set)
        }
    }
}

/// Indices of the entries within relative tolerance of the maximum.
fn argmax_set<T: Scalar>(values: &[T]) -> Vec<usize> {
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let floor = max - max.abs() * T::tie_tolerance();
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= floor)
        .map(|(i, _)| i)
        .collect()
}

fn row_candidates<T: Scalar>(table: &JointTable<T>, cap: usize) -> Result<CandidateSet<T>> {
    let (rows, cols) = table.shape();
    let choices: Vec<Vec<usize>> = (0..rows).map(|i| argmax_set(table.row(i))).collect();

    let mut count: u128 = 1;
    for c in &choices {
        count = count.saturating_mul(c.len() as u128);
        if count > cap as u128 {
            return Err(Error::TooManyCandidates { count, cap });
        }
    }

    let mass = table.marginals().row;
    let tie_sites = choices
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .map(|(state, c)| TieSite {
            state,
            tied: c.clone(),
        })
        .collect();

    // mixed-radix odometer over the tie choices, last row fastest
    let mut digits = vec![0usize; rows];
    let mut tables = Vec::with_capacity(count as usize);
    loop {
        let mut probs = vec![T::zero(); rows * cols];
        for (i, (&d, c)) in digits.iter().zip(&choices).enumerate() {
            probs[i * cols + c[d]] = mass[i];
        }
        tables.push(JointTable::from_raw(rows, cols, probs));

        let mut i = rows;
        loop {
            if i == 0 {
                return Ok(CandidateSet {
                    axis: Axis::X,
                    tables,
                    tie_sites,
                });
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// `rho_M` with the default candidate cap.
pub fn rho_m<T: Scalar>(table: &JointTable<T>, variant: Variant) -> Result<RhoMResult<T>> {
    rho_m_capped(table, variant, DEFAULT_CANDIDATE_CAP)
}

pub fn rho_m_capped<T: Scalar>(
    table: &JointTable<T>,
    variant: Variant,
    cap: usize,
) -> Result<RhoMResult<T>> {
    let indep = table.independence_product();
    let numerator = hellinger_unchecked(indep.as_slice(), table.as_slice());

    let xs = full_dep_candidates_capped(table, Axis::X, cap)?;
    let ys = full_dep_candidates_capped(table, Axis::Y, cap)?;
    let distances = |set: &CandidateSet<T>| -> Vec<T> {
        set.tables
            .iter()
            .map(|c| hellinger_unchecked(indep.as_slice(), c.as_slice()))
            .collect()
    };
    let x_distances = distances(&xs);
    let y_distances = distances(&ys);
    if x_distances
        .iter()
        .chain(&y_distances)
        .any(|&d| d <= T::zero())
    {
        return Err(Error::ZeroDenominator);
    }

    let log_sum = |d: &[T]| d.iter().fold(T::zero(), |acc, &v| acc + v.ln());
    let (a, b) = (
        T::from_usize(x_distances.len()).expect("count fits scalar"),
        T::from_usize(y_distances.len()).expect("count fits scalar"),
    );
    let (lx, ly) = (log_sum(&x_distances), log_sum(&y_distances));
    let log_den = match variant {
        Variant::Definition1 => T::from_f64_lossy(0.5) * (lx / a + ly / b),
        // each X distance appears once per Y candidate and vice versa
        Variant::Example4Compat => (b * lx + a * ly) / (a + b),
    };
    let denominator = log_den.exp();

    Ok(RhoMResult {
        value: numerator / denominator,
        numerator,
        denominator,
        candidate_counts: (xs.len(), ys.len()),
        variant,
        x_distances,
        y_distances,
    })
}

/// `p_11 - p_1 q_1` for a 2x2 table: the signed single-cell difference
/// between the table and its independence product.
pub fn phi_style_component_distance<T: Scalar>(table: &JointTable<T>) -> Result<T> {
    if table.shape() != (2, 2) {
        return Err(Error::WrongShape {
            expected: "2x2",
            rows: table.rows(),
            cols: table.cols(),
        });
    }
    let m = table.marginals();
    Ok(table.get(1, 1) - m.row[1] * m.col[1])
}
