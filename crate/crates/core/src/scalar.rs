use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the measures are computed in: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Allowed deviation of an input table's total from 1.
    fn sum_tolerance() -> Self;

    /// Relative tolerance used when deciding whether two row (or column)
    /// entries tie for the maximum.
    fn tie_tolerance() -> Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any Float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn sum_tolerance() -> Self {
        1e-9
    }

    fn tie_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn sum_tolerance() -> Self {
        1e-5
    }

    fn tie_tolerance() -> Self {
        1e-6
    }
}
