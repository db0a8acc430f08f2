//! Scalar abstraction for soft values.
//!
//! Every decoder is generic over the LLR type so that the same code runs in
//! `f64` (the reference precision) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type usable as a log-likelihood ratio.
pub trait Llr:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts from `f64`, rounding to the nearest representable value.
    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).unwrap_or_else(Self::nan)
    }

    /// Widens to `f64`.
    fn to_f64_lossless(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Largest magnitude handed to `atanh` by the exact check-node update:
    /// `1 - eps`, where `eps` is the machine epsilon of the type.
    fn atanh_clamp() -> Self {
        Self::one() - Self::epsilon()
    }
}

impl Llr for f32 {}
impl Llr for f64 {}

/// Hard decision: 0 for non-negative LLRs, 1 otherwise.
#[inline]
pub fn hard_decision<T: Llr>(llr: T) -> u8 {
    u8::from(llr < T::zero())
}
