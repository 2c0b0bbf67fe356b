//! Exact amplitudes of the form `(re + im·i)/√2^s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::scalar::{Backend, ComplexF, Scalar};
use super::sqrt2::{forward_binop, ComplexSqrt2, RealSqrt2};
use crate::error::WalkError;

/// `(re + im·i)/√2^halfpow` with big-integer `re`, `im`.
///
/// Canonical form: zero is `(0, 0, 0)`, and `re`, `im` are never both even
/// while `halfpow >= 2`. Canonical values are unique, so derived equality and
/// hashing are value equality. The parity of `halfpow` of a nonzero value is
/// an invariant of the value: two nonzero amplitudes can only be added when
/// their parities agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicGaussian {
    re: BigInt,
    im: BigInt,
    halfpow: u32,
}

fn trailing_zeros(x: &BigInt) -> u64 {
    x.trailing_zeros().unwrap_or(u64::MAX)
}

impl DyadicGaussian {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>, halfpow: u32) -> Self {
        let mut v = Self { re: re.into(), im: im.into(), halfpow };
        v.canonicalize();
        v
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(v, 0, 0)
    }

    /// `1/√2^s`.
    pub fn inv_sqrt2_pow(s: u32) -> Self {
        Self::new(1, 0, s)
    }

    pub fn re_num(&self) -> &BigInt {
        &self.re
    }

    pub fn im_num(&self) -> &BigInt {
        &self.im
    }

    pub fn halfpow(&self) -> u32 {
        self.halfpow
    }

    fn canonicalize(&mut self) {
        if self.re.is_zero() && self.im.is_zero() {
            self.halfpow = 0;
            return;
        }
        let tz = trailing_zeros(&self.re).min(trailing_zeros(&self.im));
        let k = tz.min(u64::from(self.halfpow / 2));
        if k > 0 {
            self.re >>= k as usize;
            self.im >>= k as usize;
            self.halfpow -= 2 * k as u32;
        }
    }

    pub fn is_canonical(&self) -> bool {
        let mut c = self.clone();
        c.canonicalize();
        c == *self
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Parity class of `halfpow`, `None` for zero (compatible with both).
    pub fn parity(&self) -> Option<u32> {
        (!self.is_zero()).then_some(self.halfpow % 2)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Sum, or `None` when the operands sit in different √2 parity classes
    /// and the result leaves `Z[i]/√2^s`.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.halfpow % 2 != other.halfpow % 2 {
            return None;
        }
        let s = self.halfpow.max(other.halfpow);
        let lift = |v: &Self| {
            let shift = ((s - v.halfpow) / 2) as usize;
            (&v.re << shift, &v.im << shift)
        };
        let (a, b) = lift(self);
        let (c, d) = lift(other);
        Some(Self::new(a + c, b + d, s))
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other).unwrap_or_else(|| {
            panic!("sum of {self} and {other} is not of the form (a+bi)/√2^s")
        })
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&-other.clone())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        Self::new(re, im, self.halfpow + other.halfpow)
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone(), halfpow: self.halfpow }
    }

    pub fn mul_inv_sqrt2(&self) -> Self {
        Self::new(self.re.clone(), self.im.clone(), self.halfpow + 1)
    }

    /// |z|² = (re² + im²)/2^s as an exact rational.
    pub fn norm_sqr_rational(&self) -> BigRational {
        let num = &self.re * &self.re + &self.im * &self.im;
        BigRational::new(num, BigInt::one() << self.halfpow as usize)
    }

    /// The value as a rational, when it is real with an even half-power.
    pub fn to_rational(&self) -> Option<BigRational> {
        (self.im.is_zero() && self.halfpow % 2 == 0)
            .then(|| BigRational::new(self.re.clone(), BigInt::one() << (self.halfpow / 2) as usize))
    }

    /// `c/√2^s` as a pair of Q(√2) coordinates.
    fn component_to_field(&self, c: &BigInt) -> RealSqrt2 {
        let t = (self.halfpow / 2) as usize;
        if self.halfpow % 2 == 0 {
            RealSqrt2::rational(BigRational::new(c.clone(), BigInt::one() << t))
        } else {
            // c/(2^t √2) = c √2 / 2^(t+1)
            RealSqrt2::new(BigRational::zero(), BigRational::new(c.clone(), BigInt::one() << (t + 1)))
        }
    }

    pub fn to_field(&self) -> ComplexSqrt2 {
        ComplexSqrt2::new(self.component_to_field(&self.re), self.component_to_field(&self.im))
    }

    /// Exact conversion from Q(√2, i); `None` if the value is not of the
    /// form `(a + bi)/√2^s`.
    pub fn from_field(z: &ComplexSqrt2) -> Option<Self> {
        let dyadic_exp = |q: &BigRational| -> Option<u32> {
            let d = q.denom();
            let tz = d.trailing_zeros().unwrap_or(0);
            (d >> tz as usize).is_one().then_some(tz as u32)
        };
        let (re0, re1, im0, im1) = (z.re.r0(), z.re.r1(), z.im.r0(), z.im.r1());
        let rational_part = re0.is_zero() && im0.is_zero();
        let sqrt2_part = re1.is_zero() && im1.is_zero();
        if sqrt2_part {
            // (a + bi)/2^t with s = 2t
            let t = dyadic_exp(&re0)?.max(dyadic_exp(&im0)?);
            let scale = BigRational::from_integer(BigInt::one() << t as usize);
            let a = (&re0 * &scale).to_integer();
            let b = (&im0 * &scale).to_integer();
            Some(Self::new(a, b, 2 * t))
        } else if rational_part {
            // (a + bi)√2/2^(t+1) = (a + bi)/(2^t √2), s = 2t + 1
            let u = dyadic_exp(&re1)?.max(dyadic_exp(&im1)?).max(1);
            let scale = BigRational::from_integer(BigInt::one() << u as usize);
            let a = (&re1 * &scale).to_integer();
            let b = (&im1 * &scale).to_integer();
            Some(Self::new(a, b, 2 * (u - 1) + 1))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> ComplexF {
        let scale = std::f64::consts::FRAC_1_SQRT_2.powi(self.halfpow as i32);
        let re = self.re.to_f64().unwrap_or(f64::NAN);
        let im = self.im.to_f64().unwrap_or(f64::NAN);
        ComplexF::new(re * scale, im * scale)
    }
}

forward_binop!(DyadicGaussian, Add, add, add_ref);
forward_binop!(DyadicGaussian, Sub, sub, sub_ref);
forward_binop!(DyadicGaussian, Mul, mul, mul_ref);

impl Neg for DyadicGaussian {
    type Output = DyadicGaussian;
    fn neg(self) -> DyadicGaussian {
        DyadicGaussian { re: -self.re, im: -self.im, halfpow: self.halfpow }
    }
}

/// `a+bi/√2^s`, e.g. `1-1i/√2^3` for (1 − i)/(2√2).
impl fmt::Display for DyadicGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im < BigInt::zero() { '-' } else { '+' };
        write!(f, "{}{}{}i/√2^{}", self.re, sign, self.im.magnitude(), self.halfpow)
    }
}

impl FromStr for DyadicGaussian {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, WalkError> {
        let err = |reason: &str| WalkError::Parse { input: s.to_string(), reason: reason.to_string() };
        let (body, pow) = s.trim().split_once("i/√2^").ok_or_else(|| err("expected `a+bi/√2^s`"))?;
        let halfpow: u32 = pow.parse().map_err(|_| err("bad exponent"))?;
        let idx = body
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .ok_or_else(|| err("missing imaginary part"))?;
        let re: BigInt = body[..idx].parse().map_err(|_| err("bad real part"))?;
        let im: BigInt = body[idx..].trim_start_matches('+').parse().map_err(|_| err("bad imaginary part"))?;
        Ok(Self::new(re, im, halfpow))
    }
}

impl Scalar for DyadicGaussian {
    type Real = RealSqrt2;
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Self::from_int(0)
    }
    fn one() -> Self {
        Self::from_int(1)
    }
    fn imag_unit() -> Self {
        Self::new(0, 1, 0)
    }
    fn from_dyadic(value: &DyadicGaussian) -> Self {
        value.clone()
    }
    fn conj(&self) -> Self {
        DyadicGaussian::conj(self)
    }
    fn norm_sqr(&self) -> RealSqrt2 {
        RealSqrt2::rational(self.norm_sqr_rational())
    }
    fn re(&self) -> RealSqrt2 {
        self.component_to_field(&self.re)
    }
    fn im(&self) -> RealSqrt2 {
        self.component_to_field(&self.im)
    }
    fn mul_inv_sqrt2(&self) -> Self {
        DyadicGaussian::mul_inv_sqrt2(self)
    }
    fn is_zero(&self) -> bool {
        DyadicGaussian::is_zero(self)
    }
    fn to_complex(&self) -> ComplexF {
        DyadicGaussian::to_complex(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn can_add(&self, other: &Self) -> bool {
        self.checked_add(other).is_some()
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}
