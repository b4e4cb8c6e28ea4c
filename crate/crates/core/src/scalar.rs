//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
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
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for accepting a matrix as symmetric.
    const SYMMETRY_TOL: f64;

    /// Converts an `f64` literal. Panics only if the value is unrepresentable,
    /// which cannot happen for finite literals in `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy widening used for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const SYMMETRY_TOL: f64 = 1e-5;
}

impl Real for f64 {
    const SYMMETRY_TOL: f64 = 1e-12;
}
