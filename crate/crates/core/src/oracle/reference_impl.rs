//! Straight-line reference evaluations that share no code with the
//! library measures.

use serde::Serialize;

/// Hellinger distance written out term by term.
pub fn reference_hellinger(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    let mut sum = 0.0;
    for k in 0..p.len() {
        let d = p[k].sqrt() - q[k].sqrt();
        sum += d * d;
    }
    (sum / 2.0).sqrt()
}

fn row_sums(t: &[Vec<f64>]) -> Vec<f64> {
    t.iter().map(|r| r.iter().sum()).collect()
}

fn col_sums(t: &[Vec<f64>]) -> Vec<f64> {
    let mut c = vec![0.0; t[0].len()];
    for r in t {
        for (j, v) in r.iter().enumerate() {
            c[j] += v;
        }
    }
    c
}

/// Mutual information summed column-major from scratch.
pub fn reference_mutual_information(t: &[Vec<f64>]) -> f64 {
    let (px, py) = (row_sums(t), col_sums(t));
    let mut total = 0.0;
    for j in 0..py.len() {
        for i in 0..px.len() {
            let p = t[i][j];
            if p != 0.0 {
                total += p * (p.ln() - px[i].ln() - py[j].ln());
            }
        }
    }
    total
}

/// Every intermediate of a hand evaluation of `rho_M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepwiseRhoM {
    pub independence: Vec<Vec<f64>>,
    pub numerator: f64,
    pub x_candidates: Vec<Vec<Vec<f64>>>,
    pub y_candidates: Vec<Vec<Vec<f64>>>,
    pub x_distances: Vec<f64>,
    pub y_distances: Vec<f64>,
    /// Square root of the product of per-axis geometric means.
    pub definition1: f64,
    /// Product over all `(X_i, Y_j)` pairs raised to `1 / (|X| + |Y|)`.
    pub example4_compat: f64,
}

/// Every map from rows to columns whose chosen cells are row maxima,
/// found by exhaustive enumeration of all `cols^rows` maps.
fn argmax_maps(t: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let (n, m) = (t.len(), t[0].len());
    assert!(
        (m as f64).powi(n as i32) <= 1e7,
        "exhaustive enumeration limited to 1e7 maps"
    );
    let is_max = |i: usize, j: usize| {
        let best = t[i].iter().cloned().fold(f64::MIN, f64::max);
        t[i][j] >= best - best * 1e-12
    };
    let mut out = Vec::new();
    let total = m.pow(n as u32);
    for code in 0..total {
        let mut map = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            map.push(c % m);
            c /= m;
        }
        map.reverse();
        if map.iter().enumerate().all(|(i, &j)| is_max(i, j)) {
            out.push(map);
        }
    }
    out
}

fn transpose(t: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..t[0].len())
        .map(|j| t.iter().map(|r| r[j]).collect())
        .collect()
}

fn flat(t: &[Vec<f64>]) -> Vec<f64> {
    t.iter().flatten().copied().collect()
}

/// Evaluates `rho_M` directly from its definition on a probability table.
pub fn stepwise_rho_m(t: &[Vec<f64>]) -> StepwiseRhoM {
    let (px, py) = (row_sums(t), col_sums(t));
    let independence: Vec<Vec<f64>> = px
        .iter()
        .map(|a| py.iter().map(|b| a * b).collect())
        .collect();
    let pi_flat = flat(&independence);
    let numerator = reference_hellinger(&pi_flat, &flat(t));

    let x_candidates: Vec<Vec<Vec<f64>>> = argmax_maps(t)
        .into_iter()
        .map(|map| {
            let mut c = vec![vec![0.0; py.len()]; px.len()];
            for (i, j) in map.into_iter().enumerate() {
                c[i][j] = px[i];
            }
            c
        })
        .collect();
    let tt = transpose(t);
    let y_candidates: Vec<Vec<Vec<f64>>> = argmax_maps(&tt)
        .into_iter()
        .map(|map| {
            let mut c = vec![vec![0.0; py.len()]; px.len()];
            for (j, i) in map.into_iter().enumerate() {
                c[i][j] = py[j];
            }
            c
        })
        .collect();

    let dist = |c: &Vec<Vec<f64>>| reference_hellinger(&pi_flat, &flat(c));
    let x_distances: Vec<f64> = x_candidates.iter().map(dist).collect();
    let y_distances: Vec<f64> = y_candidates.iter().map(dist).collect();

    let geo = |d: &[f64]| d.iter().product::<f64>().powf(1.0 / d.len() as f64);
    let definition1 = numerator / (geo(&x_distances) * geo(&y_distances)).sqrt();

    let exponent = 1.0 / (x_distances.len() + y_distances.len()) as f64;
    let mut compat_den = 1.0;
    for dx in &x_distances {
        for dy in &y_distances {
            compat_den *= (dx * dy).powf(exponent);
        }
    }
    let example4_compat = numerator / compat_den;

    StepwiseRhoM {
        independence,
        numerator,
        x_candidates,
        y_candidates,
        x_distances,
        y_distances,
        definition1,
        example4_compat,
    }
}
