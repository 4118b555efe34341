//! Classical dependence measures on joint tables and paired samples.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table::{JointTable, TriTable};

/// Numeric state values for the rows (`values_x`) and columns (`values_y`)
/// of a table, each strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSupport<T> {
    values_x: Vec<T>,
    values_y: Vec<T>,
}

fn check_increasing<T: Scalar>(values: &[T]) -> Result<()> {
    for (k, w) in values.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            return Err(Error::SupportNotIncreasing(k + 1));
        }
    }
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::SupportNotIncreasing(k));
    }
    Ok(())
}

impl<T: Scalar> NumericSupport<T> {
    pub fn new(values_x: Vec<T>, values_y: Vec<T>) -> Result<Self> {
        check_increasing(&values_x)?;
        check_increasing(&values_y)?;
        Ok(Self { values_x, values_y })
    }

    /// `{1, ..., rows}` x `{1, ..., cols}`.
    pub fn ordinal(rows: usize, cols: usize) -> Self {
        let seq = |n: usize| (1..=n).map(|k| T::from_usize(k).expect("fits")).collect();
        Self {
            values_x: seq(rows),
            values_y: seq(cols),
        }
    }

    pub fn values_x(&self) -> &[T] {
        &self.values_x
    }

    pub fn values_y(&self) -> &[T] {
        &self.values_y
    }

    fn check_fits(&self, table: &JointTable<T>) -> Result<()> {
        if self.values_x.len() != table.rows() {
            return Err(Error::LengthMismatch {
                left: self.values_x.len(),
                right: table.rows(),
            });
        }
        if self.values_y.len() != table.cols() {
            return Err(Error::LengthMismatch {
                left: self.values_y.len(),
                right: table.cols(),
            });
        }
        Ok(())
    }
}

/// Two equal-length sequences of paired observations.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample<T> {
    xs: Vec<T>,
    ys: Vec<T>,
}

impl<T: Scalar> PairedSample<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                left: xs.len(),
                right: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewObservations {
                needed: 2,
                got: xs.len(),
            });
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite observation".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Inputs to the two-proportion comparison.
///
/// `p1 = P(Y=1 | X=1)`, `q1 = P(Y=1 | X=0)`, `p = P(Y=1)` pooled, and
/// `a`, `b` the sample sizes of the `X=1` and `X=0` groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoProportionInput<T> {
    pub p1: T,
    pub q1: T,
    pub p: T,
    pub a: u64,
    pub b: u64,
}

impl<T: Scalar> TwoProportionInput<T> {
    pub fn new(p1: T, q1: T, p: T, a: u64, b: u64) -> Result<Self> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !unit(p1) || !unit(q1) {
            return Err(Error::InvalidArgument(
                "conditional proportions must lie in [0, 1]".into(),
            ));
        }
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::DegenerateMarginal("pooled proportion must lie in (0, 1)"));
        }
        if a == 0 || b == 0 {
            return Err(Error::InvalidArgument("group sizes must be positive".into()));
        }
        Ok(Self { p1, q1, p, a, b })
    }

    /// Reads the proportions off a 2x2 table observed on `sample_size`
    /// units; the group sizes `n * P(X=x)` must be whole numbers.
    pub fn from_table(table: &JointTable<T>, sample_size: u64) -> Result<Self> {
        require_2x2(table)?;
        let m = table.marginals();
        let n = T::from_u64(sample_size).expect("fits");
        let whole = |v: T| -> Result<u64> {
            let r = v.round();
            if (v - r).abs() > T::from_f64_lossy(1e-6) * n.max(T::one()) {
                return Err(Error::InvalidArgument(format!(
                    "group size {v} is not a whole number"
                )));
            }
            r.to_u64().ok_or(Error::InvalidArgument("group size out of range".into()))
        };
        let a = whole(n * m.row[1])?;
        let b = whole(n * m.row[0])?;
        Self::new(
            table.get(1, 1) / m.row[1],
            table.get(0, 1) / m.row[0],
            m.col[1],
            a,
            b,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoProportion<T> {
    /// `(p1 - q1) / sqrt(p (1 - p))`.
    pub factor: T,
    /// `factor / sqrt(1/a + 1/b)`.
    pub z: T,
}

fn require_2x2<T: Scalar>(table: &JointTable<T>) -> Result<()> {
    if table.shape() != (2, 2) {
        return Err(Error::WrongShape {
            expected: "2x2",
            rows: table.rows(),
            cols: table.cols(),
        });
    }
    Ok(())
}

/// The phi coefficient of a 2x2 table, `(p11 - p1 q1) / sqrt(p1 (1-p1) q1 (1-q1))`.
pub fn phi_coefficient<T: Scalar>(table: &JointTable<T>) -> Result<T> {
    require_2x2(table)?;
    let m = table.marginals();
    let (p1, q1) = (m.row[1], m.col[1]);
    let den = (p1 * (T::one() - p1) * q1 * (T::one() - q1)).sqrt();
    if !(den > T::zero()) {
        return Err(Error::DegenerateMarginal("a marginal equals 0 or 1"));
    }
    Ok((table.get(1, 1) - p1 * q1) / den)
}

fn mean<T: Scalar>(values: &[T], weights: &[T]) -> T {
    values.iter().zip(weights).map(|(&v, &w)| v * w).sum()
}

/// `sum x y p(x,y) - sum x p(x) * sum y p(y)`, evaluated in centered form
/// `sum (x - mu_x)(y - mu_y) p(x,y)`.
pub fn covariance<T: Scalar>(table: &JointTable<T>, support: &NumericSupport<T>) -> Result<T> {
    support.check_fits(table)?;
    let m = table.marginals();
    let (xs, ys) = (support.values_x(), support.values_y());
    let (mx, my) = (mean(xs, &m.row), mean(ys, &m.col));
    let dy: Vec<T> = ys.iter().map(|&y| y - my).collect();
    Ok((0..table.rows())
        .map(|i| (xs[i] - mx) * mean(&dy, table.row(i)))
        .sum())
}

fn variance<T: Scalar>(values: &[T], weights: &[T]) -> T {
    let mu = mean(values, weights);
    values
        .iter()
        .zip(weights)
        .map(|(&v, &w)| (v - mu) * (v - mu) * w)
        .sum()
}

pub fn variance_x<T: Scalar>(table: &JointTable<T>, support: &NumericSupport<T>) -> Result<T> {
    support.check_fits(table)?;
    Ok(variance(support.values_x(), &table.marginals().row))
}

pub fn variance_y<T: Scalar>(table: &JointTable<T>, support: &NumericSupport<T>) -> Result<T> {
    support.check_fits(table)?;
    Ok(variance(support.values_y(), &table.marginals().col))
}

/// Pearson's correlation of the table with the given state values.
pub fn pearson_rho<T: Scalar>(table: &JointTable<T>, support: &NumericSupport<T>) -> Result<T> {
    let cov = covariance(table, support)?;
    let vx = variance_x(table, support)?;
    let vy = variance_y(table, support)?;
    if !(vx > T::zero() && vy > T::zero()) {
        return Err(Error::ZeroVariance);
    }
    Ok(cov / (vx * vy).sqrt())
}

/// 1-based ranks; errors on ties.
fn ranks<T: Scalar>(values: &[T]) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite"));
    if order.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::Ties);
    }
    let mut rank = vec![0; values.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    Ok(rank)
}

/// Spearman's rank correlation, `1 - 6 sum d_i^2 / (n (n^2 - 1))`.
///
/// Ties are rejected rather than mid-ranked; the formula is exact only
/// for distinct values.
pub fn spearman<T: Scalar>(sample: &PairedSample<T>) -> Result<T> {
    let rx = ranks(&sample.xs)?;
    let ry = ranks(&sample.ys)?;
    let d2: u128 = rx
        .iter()
        .zip(&ry)
        .map(|(&a, &b)| (a.abs_diff(b) as u128).pow(2))
        .sum();
    let n = sample.len() as u128;
    let six = T::from_u128(6 * d2).expect("fits");
    let den = T::from_u128(n * (n * n - 1)).expect("fits");
    Ok(T::one() - six / den)
}

/// `sum p(x,y) ln(p(x,y) / (p(x) p(y)))` in nats, with `0 ln 0 = 0`.
pub fn mutual_information<T: Scalar>(table: &JointTable<T>) -> T {
    let m = table.marginals();
    let mut acc = T::zero();
    for i in 0..table.rows() {
        for (j, &p) in table.row(i).iter().enumerate() {
            if p > T::zero() {
                acc = acc + p * (p / (m.row[i] * m.col[j])).ln();
            }
        }
    }
    acc
}

/// Conditional mutual information of X and Y given Z, in nats.
///
/// `sum p(x,y,z) ln(p(x,y|z) / (p(x|z) p(y|z)))`, which simplifies to
/// `ln(p(x,y,z) p(z) / (p(x,z) p(y,z)))`. Zero cells contribute nothing.
pub fn conditional_mi<T: Scalar>(table: &TriTable<T>) -> T {
    let (n, m, k) = table.dims();
    let mut pz = vec![T::zero(); k];
    let mut pxz = vec![T::zero(); n * k];
    let mut pyz = vec![T::zero(); m * k];
    for x in 0..n {
        for y in 0..m {
            for z in 0..k {
                let p = table.get(x, y, z);
                pz[z] = pz[z] + p;
                pxz[x * k + z] = pxz[x * k + z] + p;
                pyz[y * k + z] = pyz[y * k + z] + p;
            }
        }
    }
    let mut acc = T::zero();
    for x in 0..n {
        for y in 0..m {
            for z in 0..k {
                let p = table.get(x, y, z);
                if p > T::zero() {
                    acc = acc + p * (p * pz[z] / (pxz[x * k + z] * pyz[y * k + z])).ln();
                }
            }
        }
    }
    acc
}

pub fn nats_to_bits<T: Scalar>(nats: T) -> T {
    nats / T::from_f64_lossy(std::f64::consts::LN_2)
}

fn check_marginals<T: Scalar>(table: &JointTable<T>) -> Result<crate::MarginalPair<T>> {
    let m = table.marginals();
    if m.row.iter().chain(&m.col).any(|&v| !(v > T::zero())) {
        return Err(Error::DegenerateMarginal("zero marginal probability"));
    }
    Ok(m)
}

/// Pearson's chi-squared statistic for a table estimated from
/// `sample_size` observations: `n sum (p_ij - p_i. p_.j)^2 / (p_i. p_.j)`.
pub fn chi_squared<T: Scalar>(table: &JointTable<T>, sample_size: T) -> Result<T> {
    if !(sample_size > T::zero()) {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    let m = check_marginals(table)?;
    let mut acc = T::zero();
    for i in 0..table.rows() {
        for (j, &p) in table.row(i).iter().enumerate() {
            let e = m.row[i] * m.col[j];
            let d = p - e;
            acc = acc + d * d / e;
        }
    }
    Ok(sample_size * acc)
}

/// `E{A}` where `A = (p_{i|j} - p_i.) / p_i.` with probability `p_ij`: the
/// sample-free dependence factor inside chi-squared.
pub fn degree_of_dependence_ea<T: Scalar>(table: &JointTable<T>) -> Result<T> {
    let m = check_marginals(table)?;
    let mut acc = T::zero();
    for i in 0..table.rows() {
        for (j, &p) in table.row(i).iter().enumerate() {
            let conditional = p / m.col[j];
            acc = acc + p * (conditional - m.row[i]) / m.row[i];
        }
    }
    Ok(acc)
}

/// Cramer's V, `sqrt(chi2 / (n min(r-1, c-1)))`.
pub fn cramers_v<T: Scalar>(table: &JointTable<T>, sample_size: T) -> Result<T> {
    let chi2 = chi_squared(table, sample_size)?;
    let k = (table.rows().min(table.cols()) - 1) as f64;
    Ok((chi2 / (sample_size * T::from_f64_lossy(k))).sqrt())
}

/// Tschuprow's T, `sqrt(chi2 / (n sqrt((r-1)(c-1))))`.
pub fn tschuprow_t<T: Scalar>(table: &JointTable<T>, sample_size: T) -> Result<T> {
    let chi2 = chi_squared(table, sample_size)?;
    let k = (((table.rows() - 1) * (table.cols() - 1)) as f64).sqrt();
    Ok((chi2 / (sample_size * T::from_f64_lossy(k))).sqrt())
}

pub fn two_proportion<T: Scalar>(input: &TwoProportionInput<T>) -> TwoProportion<T> {
    let factor = (input.p1 - input.q1) / (input.p * (T::one() - input.p)).sqrt();
    let inv = |k: u64| T::one() / T::from_u64(k).expect("fits");
    let z = factor / (inv(input.a) + inv(input.b)).sqrt();
    TwoProportion { factor, z }
}
