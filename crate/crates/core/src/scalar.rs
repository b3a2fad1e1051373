use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating point scalar used by the feature and scoring code: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` constant.
    fn lit(v: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(v).expect("f64 constant fits the scalar type")
    }

    fn from_count(n: usize) -> Self {
        <Self as num_traits::FromPrimitive>::from_usize(n).expect("count fits the scalar type")
    }

    fn as_f64(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
