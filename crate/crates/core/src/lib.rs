//! Dependence measures for discrete bivariate distributions.
//!
//! The centerpiece is [`rho_m`]: the Hellinger distance between a joint
//! table and its independence product, normalized by the geometric mean of
//! the distances from the independence product to the full-dependence
//! tables that preserve either marginal. It reduces to the phi coefficient's
//! structure on 2x2 tables and captures non-linear dependence on larger
//! ones.
//!
//! Alongside it the crate provides the classical measures it is usually
//! compared with ([`classical`]), CSV/JSON table formats ([`format`]) and
//! brute-force oracles that check the underlying claims ([`oracle`]).
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` case.
//!
//! ```
//! use rhom::{rho_m, Table, Variant};
//!
//! let p = Table::from_probs(&[vec![0.3, 0.2], vec![0.1, 0.4]]).unwrap();
//! let r = rho_m(&p, Variant::Definition1).unwrap();
//! assert!((r.value - 0.2749).abs() < 1e-4);
//! ```

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod dependence;
pub mod error;
pub mod format;
pub mod hellinger;
pub mod oracle;
pub mod reference;
pub mod scalar;
pub mod table;

pub use classical::{
    chi_squared, conditional_mi, covariance, cramers_v, degree_of_dependence_ea, mutual_information,
    nats_to_bits, pearson_rho, phi_coefficient, spearman, tschuprow_t, two_proportion, variance_x,
    variance_y, NumericSupport, PairedSample, TwoProportion, TwoProportionInput,
};
pub use dependence::{
    full_dep_candidates, full_dep_candidates_capped, phi_style_component_distance, rho_m,
    rho_m_capped, Axis, CandidateSet, RhoMResult, TieSite, Variant, DEFAULT_CANDIDATE_CAP,
};
pub use error::{Error, Result};
pub use hellinger::{hellinger, max_distanced, FlatDistribution};
pub use scalar::Scalar;
pub use table::{JointTable, MarginalPair, TriTable};

pub type Table = JointTable<f64>;
pub type Table32 = JointTable<f32>;
pub type Marginals = MarginalPair<f64>;
pub type Tri = TriTable<f64>;
pub type Distribution = FlatDistribution<f64>;
pub type Candidates = CandidateSet<f64>;
pub type RhoM = RhoMResult<f64>;
pub type Support = NumericSupport<f64>;
pub type Sample = PairedSample<f64>;
