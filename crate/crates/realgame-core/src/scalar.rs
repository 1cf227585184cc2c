//! Field abstraction so the matrix kernels and the see-saw optimizer run
//! unchanged over real (`f64`) and complex (`Complex64`) entries.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

/// Which number field a scalar type represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// Entry type of [`crate::mat::Matrix`]: either `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    const FIELD: Field;

    fn from_re(x: f64) -> Self;
    /// Complex conjugate (identity for `f64`).
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    /// Modulus |x|.
    fn abs(self) -> f64;
    /// Squared modulus |x|².
    fn abs_sq(self) -> f64;
    fn scale(self, f: f64) -> Self;
    fn is_finite(self) -> bool;
    /// Standard-normal sample (each real component independently N(0,1)).
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Box–Muller; avoids pulling a distributions crate into the hot path.
fn gaussian_f64<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const FIELD: Field = Field::Real;

    fn from_re(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn abs(self) -> f64 {
        Float::abs(self)
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        gaussian_f64(rng)
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64 { re: 0.0, im: 0.0 };
    const ONE: Self = Complex64 { re: 1.0, im: 0.0 };
    const FIELD: Field = Field::Complex;

    fn from_re(x: f64) -> Self {
        Complex64 { re: x, im: 0.0 }
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, f: f64) -> Self {
        Complex64 {
            re: self.re * f,
            im: self.im * f,
        }
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64 {
            re: gaussian_f64(rng),
            im: gaussian_f64(rng),
        }
    }
}

/// Shorthand complex constructor.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64 { re, im }
}
