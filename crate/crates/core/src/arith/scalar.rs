use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::dyadic::DyadicGaussian;

/// Floating complex backend.
pub type ComplexF = Complex64;

/// Tolerance for floating comparisons (normalization, class membership).
pub const FLOAT_TOL: f64 = 1e-12;

/// Which arithmetic a computation ran in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// `(a + bi)/√2^s` with big-integer `a`, `b`.
    Exact,
    /// The field Q(√2, i) with big-rational coordinates.
    Field,
    /// IEEE double precision.
    Float,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Float)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Field => "field",
            Backend::Float => "float",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! arith_bounds {
    ($($name:ident),*) => {
        $(
            pub trait $name:
                Sized
                + Add<Output = Self>
                + Sub<Output = Self>
                + Mul<Output = Self>
                + Neg<Output = Self>
                + for<'a> Add<&'a Self, Output = Self>
                + for<'a> Sub<&'a Self, Output = Self>
                + for<'a> Mul<&'a Self, Output = Self>
            {
            }
            impl<T> $name for T where
                T: Add<Output = T>
                    + Sub<Output = T>
                    + Mul<Output = T>
                    + Neg<Output = T>
                    + for<'a> Add<&'a T, Output = T>
                    + for<'a> Sub<&'a T, Output = T>
                    + for<'a> Mul<&'a T, Output = T>
            {
            }
        )*
    };
}

arith_bounds!(RingOps);

/// Real values produced by a backend: probabilities, expectations, residuals.
pub trait Real: Clone + Debug + PartialEq + PartialOrd + Send + Sync + RingOps {
    /// Set for floating types, whose reports carry JSON numbers.
    const FLOAT: bool = false;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    /// Exact equality for exact types; `|a - b| <= tol` for floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    /// Lossless text rendering used by the reports.
    fn render(&self) -> String;
}

/// Complex amplitudes. Implemented by the exact dyadic type, the Q(√2, i)
/// field and `Complex64`.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + RingOps {
    type Real: Real;
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_dyadic(value: &DyadicGaussian) -> Self;
    fn conj(&self) -> Self;
    fn norm_sqr(&self) -> Self::Real;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    /// Multiply by 1/√2.
    fn mul_inv_sqrt2(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> ComplexF;
    fn render(&self) -> String;

    /// Whether `self + other` stays inside the representation.
    fn can_add(&self, _other: &Self) -> bool {
        true
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other).norm_sqr().approx_eq(&<Self::Real as Real>::zero(), tol * tol)
    }
}

impl Real for f64 {
    const FLOAT: bool = true;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn render(&self) -> String {
        render_f64(*self)
    }
}

/// 17 significant digits, which round-trips any `f64`.
pub fn render_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl Scalar for ComplexF {
    type Real = f64;
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_dyadic(value: &DyadicGaussian) -> Self {
        value.to_complex()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn norm_sqr(&self) -> f64 {
        Complex64::norm_sqr(self)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
    fn mul_inv_sqrt2(&self) -> Self {
        self * std::f64::consts::FRAC_1_SQRT_2
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_complex(&self) -> ComplexF {
        *self
    }
    fn render(&self) -> String {
        format!("{}{}{}i", render_f64(self.re), if self.im.is_sign_negative() { "" } else { "+" }, render_f64(self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_render_has_17_significant_digits() {
        assert_eq!(render_f64(0.125), "1.2500000000000000e-1");
        let x = 0.1f64 + 0.2;
        assert_eq!(render_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn float_scalar_basics() {
        let z = Complex64::new(0.6, 0.8);
        assert!((Scalar::norm_sqr(&z) - 1.0).abs() < 1e-15);
        let w = Scalar::mul_inv_sqrt2(&z);
        assert!((Scalar::norm_sqr(&w) - 0.5).abs() < 1e-15);
        assert_eq!(z.render(), "5.9999999999999998e-1+8.0000000000000004e-1i");
    }
}
