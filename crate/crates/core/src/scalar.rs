use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type that robustness values are computed in.
///
/// Everything in this crate that does arithmetic on signal values is generic over
/// `Scalar`; implementations are provided for `f32` and `f64`. Formula constants are
/// parsed as `f64` and converted with [`Scalar::lit`] at evaluation time.
pub trait Scalar:
    'static + Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync
{
    /// Converts an `f64` literal. Out-of-range values saturate to infinity.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| if x > 0.0 { Self::infinity() } else { Self::neg_infinity() })
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
