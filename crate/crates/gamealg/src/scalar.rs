//! Real scalar abstraction so the whole workbench runs at `f32` or `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point scalar underlying all complex matrix arithmetic.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for tolerances and fixed constants.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the chosen scalar.
pub type C<T> = Complex<T>;

/// Complex value from `f64` parts.
pub fn c<T: Scalar>(re: f64, im: f64) -> C<T> {
    Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im))
}

/// Real constant in the scalar type.
pub fn r<T: Scalar>(x: f64) -> T {
    T::from_f64_lossy(x)
}
