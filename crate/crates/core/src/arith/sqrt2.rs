//! The real quadratic field Q(√2) and its Gaussian extension Q(√2, i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::DyadicGaussian;
use super::scalar::{Backend, ComplexF, Real, Scalar};

macro_rules! forward_binop {
    ($ty:ty, $tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                <$ty>::$imp(self, rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                <$ty>::$imp(&self, rhs)
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                <$ty>::$imp(&self, &rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

/// Renders a rational as `num/den` (always with a denominator).
pub fn render_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `r0 + r1·√2` with rational coordinates, stored as `(a + b√2)/d` with
/// `d > 0` and `gcd(a, b, d) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealSqrt2 {
    a: BigInt,
    b: BigInt,
    d: BigInt,
}

impl RealSqrt2 {
    fn reduced(mut a: BigInt, mut b: BigInt, mut d: BigInt) -> Self {
        if a.is_zero() && b.is_zero() {
            return Self { a, b, d: BigInt::one() };
        }
        if d.is_negative() {
            a = -a;
            b = -b;
            d = -d;
        }
        let mut g = d.gcd(&a);
        if !g.is_one() {
            g = g.gcd(&b);
        }
        if !g.is_one() {
            a /= &g;
            b /= &g;
            d /= &g;
        }
        Self { a, b, d }
    }

    pub fn new(r0: BigRational, r1: BigRational) -> Self {
        let d = r0.denom().lcm(r1.denom());
        let a = r0.numer() * (&d / r0.denom());
        let b = r1.numer() * (&d / r1.denom());
        Self::reduced(a, b, d)
    }

    pub fn rational(r0: BigRational) -> Self {
        let (a, d) = r0.into_raw();
        Self::reduced(a, BigInt::zero(), d)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::reduced(num.into(), BigInt::zero(), den.into())
    }

    pub fn sqrt2() -> Self {
        Self { a: BigInt::zero(), b: BigInt::one(), d: BigInt::one() }
    }

    /// The rational coordinate.
    pub fn r0(&self) -> BigRational {
        BigRational::new(self.a.clone(), self.d.clone())
    }

    /// The coefficient of √2.
    pub fn r1(&self) -> BigRational {
        BigRational::new(self.b.clone(), self.d.clone())
    }

    /// The rational value, if the √2 coordinate vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.b.is_zero().then(|| self.r0())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let s0 = self.a.sign().cmp(&Sign::NoSign);
        let s1 = self.b.sign().cmp(&Sign::NoSign);
        match (s0, s1) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (x, _) => {
                // opposite signs: compare a^2 against 2 b^2
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * 2u32;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * 2u32;
        if norm.is_zero() {
            return None;
        }
        Some(Self::reduced(&self.a * &self.d, -(&self.b * &self.d), norm))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::reduced(&self.a * q.numer(), &self.b * q.numer(), &self.d * q.denom())
    }

    /// Division by √2: `(r0 + r1√2)/√2 = r1 + (r0/2)√2`.
    pub fn div_sqrt2(&self) -> Self {
        Self::reduced(&self.b * 2u32, self.a.clone(), &self.d * 2u32)
    }

    fn add_ref(&self, o: &Self) -> Self {
        if self.d == o.d {
            Self::reduced(&self.a + &o.a, &self.b + &o.b, self.d.clone())
        } else {
            Self::reduced(&self.a * &o.d + &o.a * &self.d, &self.b * &o.d + &o.b * &self.d, &self.d * &o.d)
        }
    }

    fn sub_ref(&self, o: &Self) -> Self {
        if self.d == o.d {
            Self::reduced(&self.a - &o.a, &self.b - &o.b, self.d.clone())
        } else {
            Self::reduced(&self.a * &o.d - &o.a * &self.d, &self.b * &o.d - &o.b * &self.d, &self.d * &o.d)
        }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        Self::reduced(
            &self.a * &o.a + &self.b * &o.b * 2u32,
            &self.a * &o.b + &self.b * &o.a,
            &self.d * &o.d,
        )
    }
}

forward_binop!(RealSqrt2, Add, add, add_ref);
forward_binop!(RealSqrt2, Sub, sub, sub_ref);
forward_binop!(RealSqrt2, Mul, mul, mul_ref);

impl Neg for RealSqrt2 {
    type Output = RealSqrt2;
    fn neg(self) -> RealSqrt2 {
        RealSqrt2 { a: -self.a, b: -self.b, d: self.d }
    }
}

impl PartialOrd for RealSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for RealSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            f.write_str(&render_rational(&self.r0()))
        } else {
            let sign = if self.b.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}√2", render_rational(&self.r0()), sign, render_rational(&self.r1().abs()))
        }
    }
}

impl FromStr for RealSqrt2 {
    type Err = String;

    /// Inverse of `Display`: `a/b` or `a/b±c/d√2`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(body) = s.strip_suffix("√2") {
            // split at the sign that separates the two coordinates
            let idx = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(i, _)| i)
                .last()
                .ok_or_else(|| format!("missing sign in `{s}`"))?;
            let r0 = parse_rational(&body[..idx]).ok_or_else(|| format!("bad rational in `{s}`"))?;
            let mut r1 = parse_rational(&body[idx + 1..]).ok_or_else(|| format!("bad rational in `{s}`"))?;
            if body[idx..].starts_with('-') {
                r1 = -r1;
            }
            Ok(Self::new(r0, r1))
        } else {
            parse_rational(s).map(Self::rational).ok_or_else(|| format!("bad rational `{s}`"))
        }
    }
}

impl Real for RealSqrt2 {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::rational(BigRational::from_integer(v.into()))
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::rational(q.clone())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.r0()) + rational_to_f64(&self.r1()) * std::f64::consts::SQRT_2
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// `re + im·i` with `re`, `im` in Q(√2). A field: every reachable amplitude of
/// an exactly specified rational or dyadic initial state lives here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexSqrt2 {
    pub re: RealSqrt2,
    pub im: RealSqrt2,
}

impl ComplexSqrt2 {
    pub fn new(re: RealSqrt2, im: RealSqrt2) -> Self {
        Self { re, im }
    }

    /// Gaussian rational `(a + bi)/d`.
    pub fn gaussian(a: i64, b: i64, d: i64) -> Self {
        Self { re: RealSqrt2::from_ratio(a, d), im: RealSqrt2::from_ratio(b, d) }
    }

    pub fn from_real(re: RealSqrt2) -> Self {
        Self { re, im: <RealSqrt2 as Real>::zero() }
    }

    pub fn inverse(&self) -> Option<Self> {
        let norm = self.norm_sqr().inverse()?;
        Some(Self { re: &self.re * &norm, im: -(&self.im * &norm) })
    }

    /// Exact conversion into the dyadic representation, when one exists.
    pub fn to_dyadic(&self) -> Option<DyadicGaussian> {
        DyadicGaussian::from_field(self)
    }

    fn add_ref(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

forward_binop!(ComplexSqrt2, Add, add, add_ref);
forward_binop!(ComplexSqrt2, Sub, sub, sub_ref);
forward_binop!(ComplexSqrt2, Mul, mul, mul_ref);

impl Neg for ComplexSqrt2 {
    type Output = ComplexSqrt2;
    fn neg(self) -> ComplexSqrt2 {
        ComplexSqrt2 { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for ComplexSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+({})i", self.re, self.im)
    }
}

impl Scalar for ComplexSqrt2 {
    type Real = RealSqrt2;
    const BACKEND: Backend = Backend::Field;

    fn zero() -> Self {
        Self::from_real(<RealSqrt2 as Real>::zero())
    }
    fn one() -> Self {
        Self::from_real(<RealSqrt2 as Real>::one())
    }
    fn imag_unit() -> Self {
        Self { re: <RealSqrt2 as Real>::zero(), im: <RealSqrt2 as Real>::one() }
    }
    fn from_dyadic(value: &DyadicGaussian) -> Self {
        value.to_field()
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    fn norm_sqr(&self) -> RealSqrt2 {
        &self.re * &self.re + &self.im * &self.im
    }
    fn re(&self) -> RealSqrt2 {
        self.re.clone()
    }
    fn im(&self) -> RealSqrt2 {
        self.im.clone()
    }
    fn mul_inv_sqrt2(&self) -> Self {
        Self { re: self.re.div_sqrt2(), im: self.im.div_sqrt2() }
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(&self.re) && Real::is_zero(&self.im)
    }
    fn to_complex(&self) -> ComplexF {
        ComplexF::new(self.re.to_f64(), self.im.to_f64())
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = RealSqrt2::sqrt2();
        assert_eq!(&s * &s, RealSqrt2::from_ratio(2, 1));
    }

    #[test]
    fn sign_of_mixed_coordinates() {
        // 1 - √2 < 0, 3/2 - √2 > 0, -3/2 + √2 < 0
        assert_eq!(RealSqrt2::new(q(1, 1), q(-1, 1)).signum(), Ordering::Less);
        assert_eq!(RealSqrt2::new(q(3, 2), q(-1, 1)).signum(), Ordering::Greater);
        assert_eq!(RealSqrt2::new(q(-3, 2), q(1, 1)).signum(), Ordering::Less);
        assert_eq!(<RealSqrt2 as Real>::zero().signum(), Ordering::Equal);
        assert!(RealSqrt2::new(q(1, 1), q(-1, 2)) > <RealSqrt2 as Real>::zero());
    }

    #[test]
    fn inverse_round_trips() {
        let x = RealSqrt2::new(q(3, 7), q(-2, 5));
        assert_eq!(&x * &x.inverse().unwrap(), <RealSqrt2 as Real>::one());
        let z = ComplexSqrt2::new(x.clone(), RealSqrt2::new(q(1, 3), q(1, 1)));
        assert_eq!(&z * &z.inverse().unwrap(), ComplexSqrt2::one());
        assert!(<RealSqrt2 as Real>::zero().inverse().is_none());
    }

    #[test]
    fn render_and_parse() {
        let x = RealSqrt2::new(q(1, 1), q(-1, 2));
        assert_eq!(x.to_string(), "1/1-1/2√2");
        assert_eq!(x.to_string().parse::<RealSqrt2>().unwrap(), x);
        let y = RealSqrt2::new(q(-5, 8), q(0, 1));
        assert_eq!(y.to_string(), "-5/8");
        assert_eq!("-5/8".parse::<RealSqrt2>().unwrap(), y);
        let w = RealSqrt2::new(q(-1, 3), q(7, 2));
        assert_eq!(w.to_string().parse::<RealSqrt2>().unwrap(), w);
    }

    #[test]
    fn inv_sqrt2_scaling() {
        let z = ComplexSqrt2::gaussian(3, 4, 5);
        let w = z.mul_inv_sqrt2().mul_inv_sqrt2();
        assert_eq!(w, ComplexSqrt2::gaussian(3, 4, 10));
        assert_eq!(z.norm_sqr(), <RealSqrt2 as Real>::one());
    }
}
