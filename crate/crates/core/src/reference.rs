//! Reference tables with published measure values, used by the oracles and
//! the acceptance suite.

/// A reference joint table and the values printed alongside it.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceCase {
    pub id: &'static str,
    pub probs: &'static [&'static [f64]],
    pub rho_m: f64,
    /// Pearson's rho with supports `{1, ..., n}`, where printed.
    pub pearson: Option<f64>,
    pub cramers_v: f64,
    /// Full-dependence candidate counts `(|P^X|, |P^Y|)`.
    pub candidate_counts: (usize, usize),
}

pub const EXAMPLE_1: ReferenceCase = ReferenceCase {
    id: "example1",
    probs: &[&[0.3, 0.2], &[0.1, 0.4]],
    rho_m: 0.2783,
    pearson: None,
    cramers_v: 0.4082,
    candidate_counts: (1, 1),
};

/// Example 1 with the off-diagonal entries swapped.
pub const EXAMPLE_1_SWAPPED: ReferenceCase = ReferenceCase {
    id: "example1-swapped",
    probs: &[&[0.3, 0.1], &[0.2, 0.4]],
    ..EXAMPLE_1
};

pub const EXAMPLE_2: ReferenceCase = ReferenceCase {
    id: "example2",
    probs: &[
        &[0.05, 0.03, 0.20],
        &[0.30, 0.07, 0.05],
        &[0.04, 0.20, 0.06],
    ],
    rho_m: 0.4113,
    pearson: Some(-0.2025),
    cramers_v: 0.5472,
    candidate_counts: (1, 1),
};

/// Example 2 with rows reordered into a linear pattern.
pub const EXAMPLE_2_LINEAR: ReferenceCase = ReferenceCase {
    id: "example2-linear",
    probs: &[
        &[0.05, 0.03, 0.20],
        &[0.04, 0.20, 0.05],
        &[0.30, 0.07, 0.06],
    ],
    rho_m: 0.4075,
    pearson: Some(-0.5474),
    cramers_v: 0.5467,
    candidate_counts: (1, 1),
};

pub const EXAMPLE_3: ReferenceCase = ReferenceCase {
    id: "example3",
    probs: &[
        &[0.30, 0.03, 0.20],
        &[0.05, 0.07, 0.05],
        &[0.04, 0.20, 0.06],
    ],
    rho_m: 0.450011,
    pearson: Some(0.1383),
    cramers_v: 0.4257843,
    candidate_counts: (1, 1),
};

pub const EXAMPLE_4: ReferenceCase = ReferenceCase {
    id: "example4",
    probs: &[
        &[0.11, 0.01, 0.01, 0.01, 0.01],
        &[0.01, 0.01, 0.01, 0.01, 0.25],
        &[0.01, 0.10, 0.10, 0.01, 0.01],
        &[0.01, 0.01, 0.01, 0.15, 0.01],
        &[0.01, 0.10, 0.01, 0.01, 0.01],
    ],
    rho_m: 0.5731,
    pearson: Some(-0.0491),
    cramers_v: 0.6652,
    candidate_counts: (2, 2),
};

pub const ALL: [ReferenceCase; 6] = [
    EXAMPLE_1,
    EXAMPLE_1_SWAPPED,
    EXAMPLE_2,
    EXAMPLE_2_LINEAR,
    EXAMPLE_3,
    EXAMPLE_4,
];

const S: f64 = 1.0 / 7.0;
const S2: f64 = 2.0 / 7.0;

/// Mutual information pair where the text claims `MI_p > MI_q`.
pub const MI_P: &[&[f64]] = &[&[3.0 / 8.0, 1.0 / 8.0], &[1.0 / 8.0, 3.0 / 8.0]];
pub const MI_Q: &[&[f64]] = &[&[1.0 / 2.0, 0.0], &[1.0 / 8.0, 3.0 / 8.0]];
/// Mutual information pair with `MI_r < MI_s`; `s` keeps `r`'s marginals
/// and zeros.
pub const MI_R: &[&[f64]] = &[&[0.0, S, S], &[S, S, S], &[S, S, 0.0]];
pub const MI_S: &[&[f64]] = &[&[0.0, 0.0, S2], &[S, S2, 0.0], &[S, S, 0.0]];

pub fn to_nested(probs: &[&[f64]]) -> Vec<Vec<f64>> {
    probs.iter().map(|r| r.to_vec()).collect()
}

impl ReferenceCase {
    pub fn nested(&self) -> Vec<Vec<f64>> {
        to_nested(self.probs)
    }

    pub fn table(&self) -> crate::JointTable<f64> {
        crate::JointTable::from_probs(&self.nested()).expect("reference tables are valid")
    }
}
