//! Scalar abstraction: the solvers are generic over a complex scalar type
//! whose real part implements [`Real`].

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, RemAssign, Sub, SubAssign};

/// A real floating-point type (f32 or f64).
pub trait Real:
    Float
    + FromPrimitive
    + Debug
    + Display
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
{
    /// Unit roundoff: the machine epsilon of the format.
    fn unit_roundoff() -> Self {
        Self::epsilon()
    }

    /// Shorthand for converting an f64 constant (tolerances, literals).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A complex scalar with access to its real/imaginary parts and conjugate.
pub trait Scalar:
    Copy
    + Debug
    + Display
    + PartialEq
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
{
    type Real: Real;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(re: Self::Real) -> Self;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;
    /// Squared modulus |z|².
    fn abs_sqr(&self) -> Self::Real;
    /// Modulus |z|.
    fn abs(&self) -> Self::Real {
        self.abs_sqr().sqrt()
    }
    /// Principal square root.
    fn sqrt(&self) -> Self;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn is_finite(&self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }
    /// Convenience for f64 constants in generic code.
    fn of(x: f64) -> Self {
        Self::from_real(Self::Real::of(x))
    }
}

impl<R: Real> Scalar for Complex<R> {
    type Real = R;

    fn zero() -> Self {
        Complex::new(R::zero(), R::zero())
    }
    fn one() -> Self {
        Complex::new(R::one(), R::zero())
    }
    fn from_real(re: R) -> Self {
        Complex::new(re, R::zero())
    }
    fn from_parts(re: R, im: R) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> R {
        self.re
    }
    fn im(&self) -> R {
        self.im
    }
    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }
    fn abs_sqr(&self) -> R {
        self.re * self.re + self.im * self.im
    }
    fn sqrt(&self) -> Self {
        Complex::sqrt(*self)
    }
}
