//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
///
/// Tolerances are written as `f64` literals throughout the crate and
/// converted with [`Real::tol`], which clamps them to a floor that is
/// attainable at the type's precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Smallest tolerance that is meaningful for this type.
    const TOL_FLOOR: f64;

    /// Convert an `f64` constant.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Convert a nominal tolerance, clamped to [`Real::TOL_FLOOR`].
    #[inline]
    fn tol(nominal: f64) -> Self {
        Self::lit(nominal.max(Self::TOL_FLOOR))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const TOL_FLOOR: f64 = 0.0;
}

impl Real for f32 {
    const TOL_FLOOR: f64 = 1e-4;
}

/// Build a complex scalar from `f64` parts.
#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Unit-modulus phase of `z`, or one when `z` is zero.
#[inline]
pub(crate) fn phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r > T::zero() {
        z / r
    } else {
        Complex::new(T::one(), T::zero())
    }
}
