//! Brute-force verifiers for the claims the measures rely on.
//!
//! Every oracle re-derives its expectation along a path that does not go
//! through the code it checks: its own Hellinger sum, its own marginals,
//! exhaustive enumeration instead of argmax bookkeeping. Findings are
//! collected into a [`Provenance`] file keyed by claim id.
//!
//! All oracles are deterministic for a fixed seed: trials run sequentially
//! and reduce in trial order.

mod bound;
mod coupling;
mod examples;
mod prop1;
mod reference_impl;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use bound::search_rho_m_bound;
pub use coupling::{verify_cov_max, Coupling, MAX_COUPLING_STATES};
pub use examples::{resolve_example4_variant, verify_mi_examples, verify_reference_examples};
pub use prop1::{verify_prop1, Prop1Mode};
pub use reference_impl::{reference_hellinger, reference_mutual_information, stepwise_rho_m, StepwiseRhoM};

/// Outcome of one oracle run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub claim: String,
    pub trials: u64,
    /// Smallest slack observed between the claim's bound and the data;
    /// negative means the claim was violated by that much.
    pub worst_margin: f64,
    pub passed: bool,
    /// Counterexample input; always present when `passed` is false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Computed quantities worth keeping.
    #[serde(default)]
    pub values: BTreeMap<String, Value>,
}

impl OracleReport {
    pub(crate) fn new(claim: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            trials: 0,
            worst_margin: f64::MAX,
            passed: true,
            witness: None,
            values: BTreeMap::new(),
        }
    }

    pub(crate) fn record(&mut self, key: &str, value: impl Serialize) {
        self.values.insert(
            key.to_owned(),
            serde_json::to_value(value).expect("plain data serializes"),
        );
    }

    /// Folds one observation of `bound - observed` into the report; the
    /// first violation beyond `tol` becomes the witness.
    pub(crate) fn observe(&mut self, margin: f64, tol: f64, witness: impl FnOnce() -> Value) {
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        if margin < -tol && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub(crate) fn fail(&mut self, witness: Value) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }

    /// Line for terminal output.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: trials={} worst_margin={:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.claim,
            self.trials,
            self.worst_margin
        )
    }
}

/// Named claims the oracle can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimId {
    Prop1,
    CovMax,
    RhoMBound,
    Example4Variant,
    MiExamples,
    ReferenceExamples,
}

impl ClaimId {
    pub const ALL: [ClaimId; 6] = [
        ClaimId::Prop1,
        ClaimId::CovMax,
        ClaimId::RhoMBound,
        ClaimId::Example4Variant,
        ClaimId::MiExamples,
        ClaimId::ReferenceExamples,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Prop1 => "prop1",
            ClaimId::CovMax => "cov-max",
            ClaimId::RhoMBound => "rho-m-bound",
            ClaimId::Example4Variant => "example4-variant",
            ClaimId::MiExamples => "mi-examples",
            ClaimId::ReferenceExamples => "reference-examples",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown claim id {s:?}")))
    }
}

/// Parameters shared by the randomized oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Distribution length for `prop1`, state count for `cov-max`, rows
    /// for `rho-m-bound`.
    pub n: usize,
    /// Columns for `rho-m-bound`.
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            n: 6,
            m: 6,
            trials: 10_000,
            seed: 42,
        }
    }
}

/// Runs one claim with `options`.
pub fn run_claim(claim: ClaimId, options: &OracleOptions) -> Result<OracleReport> {
    match claim {
        ClaimId::Prop1 => {
            let mut rng = seeded(options.seed);
            let p = positive_simplex_point(&mut rng, options.n);
            let vertex = verify_prop1(&p, Prop1Mode::VertexEnumeration)?;
            let random = verify_prop1(
                &p,
                Prop1Mode::RandomSearch {
                    trials: options.trials,
                    seed: options.seed,
                },
            )?;
            let mut report = OracleReport::new(ClaimId::Prop1.as_str());
            report.trials = vertex.trials + random.trials;
            report.record("distribution", &p);
            report.record("vertex_enumeration", &vertex);
            report.record("random_search", &random);
            report.worst_margin = vertex.worst_margin.min(random.worst_margin);
            for sub in [&vertex, &random] {
                if let Some(w) = &sub.witness {
                    report.fail(w.clone());
                }
            }
            Ok(report)
        }
        ClaimId::CovMax => {
            let mut rng = seeded(options.seed);
            let mut report = OracleReport::new(ClaimId::CovMax.as_str());
            let mut runs = Vec::new();
            for _ in 0..options.trials {
                let (a, b, mass) = random_coupling_config(&mut rng, options.n);
                let sub = verify_cov_max(&a, &b, &mass)?;
                report.trials += sub.trials;
                report.worst_margin = report.worst_margin.min(sub.worst_margin);
                if let Some(w) = &sub.witness {
                    report.fail(w.clone());
                }
                runs.push(sub.values.get("identity_maximal").cloned());
            }
            let identity_failures = runs
                .iter()
                .filter(|v| matches!(v, Some(Value::Bool(false))))
                .count();
            report.record("configurations", options.trials);
            report.record("identity_not_maximal_count", identity_failures);
            Ok(report)
        }
        ClaimId::RhoMBound => search_rho_m_bound(options.n, options.m, options.trials, options.seed),
        ClaimId::Example4Variant => Ok(resolve_example4_variant()),
        ClaimId::MiExamples => Ok(verify_mi_examples()),
        ClaimId::ReferenceExamples => Ok(verify_reference_examples()),
    }
}

/// Oracle findings keyed by claim id, serialized in key order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Provenance {
    pub claims: BTreeMap<String, OracleReport>,
}

impl Provenance {
    pub fn insert(&mut self, report: OracleReport) {
        self.claims.insert(report.claim.clone(), report);
    }

    pub fn get(&self, claim: &str) -> Option<&OracleReport> {
        self.claims.get(claim)
    }

    pub fn all_passed(&self) -> bool {
        self.claims.values().all(|r| r.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&text)
    }
}

pub(crate) fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on the simplex (symmetric Dirichlet(1)).
pub(crate) fn simplex_point<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Dirichlet(alpha) point; small `alpha` concentrates mass near faces
/// and vertices.
pub(crate) fn dirichlet_point<R: Rng>(rng: &mut R, len: usize, alpha: f64) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("positive shape");
    loop {
        let draws: Vec<f64> = (0..len).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            return draws.into_iter().map(|x| x / total).collect();
        }
    }
}

pub(crate) fn positive_simplex_point<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    loop {
        let p = simplex_point(rng, len);
        if p.iter().all(|&x| x > 0.0) {
            return p;
        }
    }
}

fn random_increasing<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut v = rng.random_range(-5.0..5.0);
    (0..len)
        .map(|_| {
            v += rng.random_range(0.05..3.0);
            v
        })
        .collect()
}

pub(crate) fn random_coupling_config<R: Rng>(
    rng: &mut R,
    n: usize,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let a = random_increasing(rng, n);
    let b = random_increasing(rng, n);
    let mass = positive_simplex_point(rng, n);
    (a, b, mass)
}
