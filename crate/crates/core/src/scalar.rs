//! Scalar abstraction for the numeric kernel.
//!
//! Everything downstream of the parser is generic over the real scalar
//! type; `f64` is what the CLI and the test suites use, `f32` works for
//! quick smoke checks at correspondingly loose tolerances.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

/// Real scalar usable as the coefficient field: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant converts to the scalar type")
}

/// Converts a pair of `f64`s into a complex number over the working scalar.
#[inline]
pub fn complex<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

/// Lossy view of a scalar as `f64`, for diagnostics only.
#[inline]
pub fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
