use serde_json::json;

use super::{seeded, simplex_point, OracleReport};
use crate::dependence::{rho_m, Variant};
use crate::error::{Error, Result};
use crate::table::JointTable;

/// Tables with a marginal below this are resampled.
const MIN_MARGINAL: f64 = 1e-6;

/// Samples `trials` uniform random `n x m` tables and records the largest
/// `rho_M` seen. Any value above `1 + 1e-9` is reported as a witness.
///
/// This probes an unproven bound, so a failure is a finding about the
/// measure rather than a bug in the search.
pub fn search_rho_m_bound(n: usize, m: usize, trials: u64, seed: u64) -> Result<OracleReport> {
    if !(2..=6).contains(&n) || !(2..=6).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "table dimensions must be between 2 and 6, got {n}x{m}"
        )));
    }
    let mut rng = seeded(seed);
    let mut report = OracleReport::new("rho-m-bound");
    let mut max_seen = f64::MIN;
    let mut argmax_table = Vec::new();
    let mut resampled = 0u64;
    let mut skipped = 0u64;

    for _ in 0..trials {
        let table = loop {
            let cells = simplex_point(&mut rng, n * m);
            let nested: Vec<Vec<f64>> = cells.chunks(m).map(<[f64]>::to_vec).collect();
            let rows_ok = nested.iter().all(|r| r.iter().sum::<f64>() >= MIN_MARGINAL);
            let cols_ok = (0..m).all(|j| nested.iter().map(|r| r[j]).sum::<f64>() >= MIN_MARGINAL);
            if rows_ok && cols_ok {
                break JointTable::from_probs(&nested)?;
            }
            resampled += 1;
        };
        match rho_m(&table, Variant::Definition1) {
            Ok(r) => {
                if r.value > max_seen {
                    max_seen = r.value;
                    argmax_table = table.to_nested();
                }
                report.observe(1.0 - r.value, 1e-9, || {
                    json!({ "table": table.to_nested(), "rho_m": r.value })
                });
            }
            Err(Error::TooManyCandidates { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    report.trials = trials;
    report.record("dims", [n, m]);
    report.record("seed", seed);
    report.record("max_observed", max_seen);
    report.record("max_table", argmax_table);
    report.record("resampled", resampled);
    report.record("skipped_candidate_cap", skipped);
    Ok(report)
}
