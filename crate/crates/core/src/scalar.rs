//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the toolkit computes in: `f32` or `f64`.
///
/// Every tolerance in the crate is written as an `f64` literal and converted
/// through [`cst`]; with `f32` the tighter tolerances saturate at the type's
/// resolution, so `f64` is the type the published thresholds are calibrated for.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Default
    + Display
    + Debug
    + Sum
    + rustfft::FftNum
    + serde::Serialize
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type C<T> = Complex<T>;

/// Convert an `f64` constant into `T`, flushing values below the type's
/// resolution to its smallest positive normal instead of zero.
#[inline]
pub fn cst<T: Real>(x: f64) -> T {
    let v = T::from_f64(x).unwrap_or_else(T::zero);
    if x > 0.0 && v <= T::zero() {
        T::min_positive_value()
    } else {
        v
    }
}

#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize fits in a float")
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

/// Radius schedule `1 - 2^{-k}`.
#[inline]
pub fn dyadic_radius<T: Real>(k: u32) -> T {
    T::one() - T::from_f64(2f64.powi(-(k as i32))).expect("finite")
}

pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Tolerance `x`, raised to `256·ε` when `T` cannot resolve it.
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    cst::<T>(x).max(T::epsilon() * cst(256.0))
}
