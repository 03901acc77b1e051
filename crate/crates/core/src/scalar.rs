//! Scalar abstraction shared by the numeric parts of the workspace.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every finite `f64` is representable
    /// (possibly rounded) in both supported types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize fits in a float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Pairwise summation; keeps the sum independent of how a reduction is split.
pub fn pairwise_sum<S: Real>(values: &[S]) -> S {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().copied().fold(S::zero(), |a, b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
