use serde_json::json;

use super::{dirichlet_point, reference_hellinger, seeded, simplex_point, OracleReport};
use crate::error::Result;
use crate::hellinger::{max_distanced, FlatDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prop1Mode {
    /// Distance to every vertex of the simplex.
    VertexEnumeration,
    /// Distance to `trials` random distributions.
    RandomSearch { trials: u64, seed: u64 },
}

const TOL: f64 = 1e-12;

/// Checks that [`max_distanced`] returns the farthest distribution from `p`.
///
/// Vertex mode enumerates every point mass and confirms the returned
/// vertex is a global maximizer among them and that its distance matches
/// `sqrt(1 - sqrt(min p))`. Random mode samples distributions, half
/// uniformly on the simplex and half near its faces, and confirms none is
/// farther than the closed form.
pub fn verify_prop1(p: &[f64], mode: Prop1Mode) -> Result<OracleReport> {
    let dist = FlatDistribution::new(p.to_vec())?;
    let (vertex, closed_form) = max_distanced(&dist)?;
    let argmax = vertex
        .as_slice()
        .iter()
        .position(|&v| v == 1.0)
        .expect("vertex has a unit entry");

    let mut report = OracleReport::new("prop1");
    report.record("closed_form", closed_form);
    report.record("maximizer_index", argmax);

    match mode {
        Prop1Mode::VertexEnumeration => {
            let n = p.len();
            let distances: Vec<f64> = (0..n)
                .map(|k| {
                    let mut e = vec![0.0; n];
                    e[k] = 1.0;
                    reference_hellinger(p, &e)
                })
                .collect();
            let best = distances.iter().cloned().fold(f64::MIN, f64::max);
            let tied: Vec<usize> = (0..n).filter(|&k| distances[k] >= best - TOL).collect();
            report.trials = n as u64;
            report.record("mode", "vertex-enumeration");
            report.record("vertex_distances", &distances);
            report.record("maximizing_vertices", &tied);

            report.observe(TOL - (best - closed_form).abs(), 0.0, || {
                json!({ "p": p, "enumerated_max": best, "closed_form": closed_form })
            });
            if !tied.contains(&argmax) {
                report.fail(json!({ "p": p, "returned_vertex": argmax, "maximizers": tied }));
            }
        }
        Prop1Mode::RandomSearch { trials, seed } => {
            let mut rng = seeded(seed);
            let mut farthest = 0.0f64;
            for t in 0..trials {
                let q = if t % 2 == 0 {
                    simplex_point(&mut rng, p.len())
                } else {
                    dirichlet_point(&mut rng, p.len(), 0.05)
                };
                let d = reference_hellinger(p, &q);
                farthest = farthest.max(d);
                report.observe(closed_form - d, TOL, || json!({ "p": p, "q": q, "distance": d }));
            }
            report.trials = trials;
            report.record("mode", "random-search");
            report.record("seed", seed);
            report.record("farthest_sampled", farthest);
        }
    }
    Ok(report)
}
