//! Path sums over words in P and Q.
//!
//! `Ξ(l, m)` is the sum of all ordered products of `l` copies of P and `m`
//! copies of Q. It maps the initial coin state to the amplitude at site
//! `k = m − l` after `n = l + m` steps. In the basis {P, Q, R, S} every such
//! sum has integer coordinates times `(1/√2)^{n−1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{coin_constant, Amplitude, CoinMatrix, CoinName, ComplexSqrt2, DyadicGaussian, Mat2, RealSqrt2, Scalar};
use crate::error::{Result, WalkError};
use crate::par::*;

/// Longest word the brute-force oracle will enumerate.
pub const XI_ORACLE_CAP: u32 = 16;

fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn check_nonempty(l: u32, m: u32) -> Result<()> {
    if l == 0 && m == 0 {
        Err(WalkError::EmptyWord)
    } else {
        Ok(())
    }
}

/// Coordinates of `Ξ(l, m)` in the basis P, Q, R, S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiDecomposition {
    pub l: u32,
    pub m: u32,
    /// Integer coordinates before the common factor `(1/√2)^{n−1}`.
    pub integer: [BigInt; 4],
}

impl XiDecomposition {
    pub fn n(&self) -> u32 {
        self.l + self.m
    }

    /// Common factor `(1/√2)^{n−1}`.
    pub fn scale(&self) -> DyadicGaussian {
        DyadicGaussian::inv_sqrt2_pow(self.n() - 1)
    }

    fn coord(&self, i: usize) -> DyadicGaussian {
        DyadicGaussian::new(self.integer[i].clone(), 0, self.n() - 1)
    }

    pub fn p(&self) -> DyadicGaussian {
        self.coord(0)
    }
    pub fn q(&self) -> DyadicGaussian {
        self.coord(1)
    }
    pub fn r(&self) -> DyadicGaussian {
        self.coord(2)
    }
    pub fn s(&self) -> DyadicGaussian {
        self.coord(3)
    }

    /// `p·P + q·Q + r·R + s·S`.
    pub fn to_matrix(&self) -> CoinMatrix {
        CoinName::BASIS
            .iter()
            .enumerate()
            .fold(CoinMatrix::zero(), |acc, (i, name)| &acc + &coin_constant(*name).scale(&self.coord(i)))
    }
}

impl fmt::Display for XiDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q, r, s] = &self.integer;
        write!(f, "Ξ({},{}) = (1/√2)^{}·({p}P + {q}Q + {r}R + {s}S)", self.l, self.m, self.n() - 1)
    }
}

/// Closed-form sums over the number of P/Q alternations `γ`, with the rational
/// weights `(l−γ)/γ` and `(m−γ)/γ` kept as printed.
fn closed_integer_coords(l: u32, m: u32) -> Result<[BigInt; 4]> {
    let (l, m) = (i64::from(l), i64::from(m));
    if m == 0 {
        return Ok([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()]);
    }
    if l == 0 {
        return Ok([BigInt::zero(), sign(m + 1), BigInt::zero(), BigInt::zero()]);
    }
    let mut p = BigRational::zero();
    let mut q = BigRational::zero();
    let mut r = BigRational::zero();
    for gamma in 1..=l.min(m) {
        let w = BigRational::from_integer(sign(gamma) * binom(l - 1, gamma - 1) * binom(m - 1, gamma - 1));
        p += &w * BigRational::new((l - gamma).into(), gamma.into());
        q -= &w * BigRational::new((m - gamma).into(), gamma.into());
        r += &w;
    }
    let outer = BigRational::from_integer(sign(m));
    let to_int = |x: BigRational| -> Result<BigInt> {
        let x = x * &outer;
        if x.is_integer() {
            Ok(x.to_integer())
        } else {
            Err(WalkError::Consistency(format!("non-integral coordinate {x} in Ξ({l},{m})")))
        }
    };
    let r = to_int(r)?;
    Ok([to_int(p)?, to_int(q)?, r.clone(), r])
}

/// `Ξ(l, m)` from the closed form.
pub fn xi_closed(l: u32, m: u32) -> Result<CoinMatrix> {
    xi_closed_decomposition(l, m).map(|d| d.to_matrix())
}

pub fn xi_closed_decomposition(l: u32, m: u32) -> Result<XiDecomposition> {
    check_nonempty(l, m)?;
    Ok(XiDecomposition { l, m, integer: closed_integer_coords(l, m)? })
}

/// Coordinates from the per-basis cluster sums, which weight each alternation
/// count `γ` by the number of compositions of `l` and `m` into clusters.
pub fn coefficients(l: u32, m: u32) -> Result<XiDecomposition> {
    check_nonempty(l, m)?;
    let (li, mi) = (i64::from(l), i64::from(m));
    let outer = sign(mi);
    let p = match (l, m) {
        (_, 0) => BigInt::one(),
        (0 | 1, _) => BigInt::zero(),
        _ => {
            let sum: BigInt = (1..=(li - 1).min(mi)).map(|g| sign(g) * binom(li - 1, g) * binom(mi - 1, g - 1)).sum();
            &outer * sum
        }
    };
    let q = match (l, m) {
        (0, _) => sign(mi - 1),
        (_, 0 | 1) => BigInt::zero(),
        _ => {
            let sum: BigInt = (1..=li.min(mi - 1)).map(|g| sign(g) * binom(li - 1, g - 1) * binom(mi - 1, g)).sum();
            -(&outer * sum)
        }
    };
    let r = if l == 0 || m == 0 {
        BigInt::zero()
    } else {
        let sum: BigInt = (1..=li.min(mi)).map(|g| sign(g) * binom(li - 1, g - 1) * binom(mi - 1, g - 1)).sum();
        &outer * sum
    };
    Ok(XiDecomposition { l, m, integer: [p, q, r.clone(), r] })
}

/// Brute-force `Ξ(l, m)`: every ordered word with `l` P's and `m` Q's,
/// multiplied out left to right and summed.
pub fn xi_oracle(l: u32, m: u32) -> Result<CoinMatrix> {
    check_nonempty(l, m)?;
    let n = l + m;
    if n > XI_ORACLE_CAP {
        return Err(WalkError::OracleCap { len: n, cap: XI_ORACLE_CAP });
    }
    let p = coin_constant(CoinName::P);
    let q = coin_constant(CoinName::Q);
    let words = words_with_q_count(n, m);
    let products: Vec<CoinMatrix> = words
        .par_iter()
        .map(|&mask| {
            (0..n).fold(CoinMatrix::identity(), |acc, i| &acc * if mask >> i & 1 == 1 { &q } else { &p })
        })
        .collect();
    Ok(products.iter().fold(CoinMatrix::zero(), |acc, w| &acc + w))
}

/// All `n`-bit masks with exactly `ones` set bits, in increasing order.
pub fn words_with_q_count(n: u32, ones: u32) -> Vec<u32> {
    if ones > n {
        return Vec::new();
    }
    if ones == 0 {
        return vec![0];
    }
    let limit: u64 = 1 << n;
    let mut out = Vec::new();
    let mut v: u64 = (1 << ones) - 1;
    while v < limit {
        out.push(v as u32);
        // next mask with the same popcount
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Word families counted by the cluster formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClusterKind {
    /// Starts and ends with P: `2γ + 1` clusters.
    P,
    /// Starts and ends with Q: `2γ + 1` clusters.
    Q,
    /// Starts with P, ends with Q: `2γ` clusters.
    R,
    /// Starts with Q, ends with P: `2γ` clusters.
    S,
}

impl FromStr for ClusterKind {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "p" | "P" => Ok(ClusterKind::P),
            "q" | "Q" => Ok(ClusterKind::Q),
            "r" | "R" => Ok(ClusterKind::R),
            "s" | "S" => Ok(ClusterKind::S),
            other => Err(WalkError::Parse { input: other.into(), reason: "expected one of p, q, r, s".into() }),
        }
    }
}

impl ClusterKind {
    pub fn symbol(self) -> char {
        match self {
            ClusterKind::P => 'p',
            ClusterKind::Q => 'q',
            ClusterKind::R => 'r',
            ClusterKind::S => 's',
        }
    }

    /// Admissible `γ` for given `l`, `m`; empty when `hi < 1`.
    pub fn gamma_range(self, l: u32, m: u32) -> (u32, u32) {
        let hi = match self {
            ClusterKind::P => l.saturating_sub(1).min(m),
            ClusterKind::Q => l.min(m.saturating_sub(1)),
            ClusterKind::R | ClusterKind::S => l.min(m),
        };
        (1, hi)
    }
}

/// Number of cluster compositions of the given kind with `l` P's, `m` Q's
/// and alternation count `gamma`.
pub fn cluster_count(kind: ClusterKind, l: u32, m: u32, gamma: u32) -> Result<BigUint> {
    let (lo, hi) = kind.gamma_range(l, m);
    if gamma < lo || gamma > hi {
        return Err(WalkError::GammaOutOfRange { kind: kind.symbol(), gamma, lo, hi });
    }
    let (l, m, g) = (i64::from(l), i64::from(m), i64::from(gamma));
    let count = match kind {
        ClusterKind::P => binom(l - 1, g) * binom(m - 1, g - 1),
        ClusterKind::Q => binom(l - 1, g - 1) * binom(m - 1, g),
        ClusterKind::R | ClusterKind::S => binom(l - 1, g - 1) * binom(m - 1, g - 1),
    };
    Ok(count.to_biguint().expect("binomial products are non-negative"))
}

fn demand_real(m: &CoinMatrix) -> Result<()> {
    if m.entries.iter().flatten().all(DyadicGaussian::is_real) {
        Ok(())
    } else {
        Err(WalkError::Consistency(format!("expected a real matrix, got {m}")))
    }
}

/// `ᵗΞ(l, m)·Ξ(l, m)`; the transpose equals the adjoint because Ξ is real.
pub fn gram(l: u32, m: u32) -> Result<CoinMatrix> {
    let xi = xi_closed(l, m)?;
    demand_real(&xi)?;
    Ok(&xi.transpose() * &xi)
}

fn dyadic_from_rational(q: &BigRational) -> Result<DyadicGaussian> {
    DyadicGaussian::from_field(&ComplexSqrt2::from_real(RealSqrt2::rational(q.clone())))
        .ok_or_else(|| WalkError::Consistency(format!("{q} is not a dyadic rational")))
}

/// `ᵗΞΞ` from the explicit double sum over alternation counts.
pub fn gram_closed(l: u32, m: u32) -> Result<CoinMatrix> {
    check_nonempty(l, m)?;
    let (p, q) = (coin_constant(CoinName::P), coin_constant(CoinName::Q));
    if m == 0 {
        return Ok((&p.transpose() * &p).scale(&DyadicGaussian::new(1, 0, 2 * (l - 1))));
    }
    if l == 0 {
        return Ok((&q.transpose() * &q).scale(&DyadicGaussian::new(1, 0, 2 * (m - 1))));
    }
    let n = l + m;
    let (l, m) = (i64::from(l), i64::from(m));
    let mut acc = [[BigRational::zero(), BigRational::zero()], [BigRational::zero(), BigRational::zero()]];
    for g in 1..=l.min(m) {
        for d in 1..=l.min(m) {
            let weight = BigRational::new(
                sign(g + d) * binom(l - 1, g - 1) * binom(l - 1, d - 1) * binom(m - 1, g - 1) * binom(m - 1, d - 1),
                BigInt::from(g * d),
            );
            let block = [
                [l * l + (m - 2 * g) * (m - 2 * d), l * (l - 2 * g) - m * (m - 2 * d)],
                [l * (l - 2 * d) - m * (m - 2 * g), m * m + (l - 2 * g) * (l - 2 * d)],
            ];
            for (i, row) in block.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    acc[i][j] += &weight * BigInt::from(v);
                }
            }
        }
    }
    let scale = BigRational::new(BigInt::one(), BigInt::one() << n as usize);
    let e = |i: usize, j: usize| dyadic_from_rational(&(&acc[i][j] * &scale));
    Ok(Mat2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
}

/// `ᵗΞ(l,m)Ξ(l,m) − ᵗΞ(m,l)Ξ(m,l)`, always of the shape `[[a, b], [b, −a]]`.
pub fn difference_matrix(l: u32, m: u32) -> Result<CoinMatrix> {
    Ok(&gram(l, m)? - &gram(m, l)?)
}

/// Per-site Hermitian forms `M_k = ᵗΞ(l,m)Ξ(l,m)`, `k = m − l`, at time `n`:
/// `P(X_n = k) = φ*·M_k·φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    n: u32,
    forms: BTreeMap<i64, CoinMatrix>,
}

impl QuadraticForm {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, k: i64) -> Option<&CoinMatrix> {
        self.forms.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CoinMatrix)> {
        self.forms.iter().map(|(&k, m)| (k, m))
    }

    /// `Σ_k M_k`, the identity by unitarity.
    pub fn sum(&self) -> CoinMatrix {
        self.forms.values().fold(CoinMatrix::zero(), |acc, m| &acc + m)
    }

    /// `Σ_k k·M_k`, whose Hermitian form is `E(X_n)`.
    pub fn first_moment(&self) -> CoinMatrix {
        self.forms
            .iter()
            .fold(CoinMatrix::zero(), |acc, (&k, m)| &acc + &m.scale(&DyadicGaussian::from_int(k)))
    }

    /// `k ↦ φ*·M_k·φ` in the backend of `phi`.
    pub fn probabilities<S: Scalar>(&self, phi: &Amplitude<S>) -> BTreeMap<i64, S::Real> {
        self.forms
            .iter()
            .map(|(&k, m)| (k, Mat2::<S>::from_coin(m).quadratic(phi).re()))
            .collect()
    }

    /// Each `M_k` is real symmetric with non-negative diagonal and determinant.
    pub fn is_positive_semidefinite(&self) -> bool {
        self.forms.values().all(|m| {
            let entries = (entry_rational(m, 0, 0), entry_rational(m, 0, 1), entry_rational(m, 1, 0), entry_rational(m, 1, 1));
            let (Ok(a), Ok(b), Ok(c), Ok(d)) = entries else {
                return false;
            };
            b == c && !a.is_negative() && !d.is_negative() && !(&a * &d - &b * &c).is_negative()
        })
    }
}

pub fn quadratic_form(n: u32) -> Result<QuadraticForm> {
    if n == 0 {
        return Err(WalkError::EmptyWord);
    }
    let forms = (0..=n)
        .map(|l| {
            let m = n - l;
            Ok((i64::from(m) - i64::from(l), gram(l, m)?))
        })
        .collect::<Result<_>>()?;
    Ok(QuadraticForm { n, forms })
}

/// A decomposition printed for `n = 4`, with `(l, m)` the pair it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorkedExample {
    pub printed_label: (u32, u32),
    pub l: u32,
    pub m: u32,
    /// Integer coordinates of P, Q, R, S before `(1/√2)^3`.
    pub printed: [i64; 4],
    pub holds: bool,
}

/// The five printed `n = 4` decompositions. The last is printed under the
/// label `(2, 2)` but is the value of `Ξ(0, 4)`.
pub const PRINTED_N4: [((u32, u32), (u32, u32), [i64; 4]); 5] = [
    ((4, 0), (4, 0), [1, 0, 0, 0]),
    ((3, 1), (3, 1), [2, 0, 1, 1]),
    ((2, 2), (2, 2), [-1, 1, 0, 0]),
    ((1, 3), (1, 3), [0, -2, 1, 1]),
    ((2, 2), (0, 4), [0, -1, 0, 0]),
];

pub fn worked_examples() -> Result<Vec<WorkedExample>> {
    PRINTED_N4
        .iter()
        .map(|&(printed_label, (l, m), printed)| {
            let expected = XiDecomposition { l, m, integer: printed.map(BigInt::from) };
            let holds = xi_closed_decomposition(l, m)? == expected && xi_closed(l, m)? == expected.to_matrix();
            Ok(WorkedExample { printed_label, l, m, printed, holds })
        })
        .collect()
}

/// Converts an exact real matrix entry to a rational.
pub fn entry_rational(m: &CoinMatrix, i: usize, j: usize) -> Result<BigRational> {
    m.get(i, j)
        .to_rational()
        .ok_or_else(|| WalkError::Consistency(format!("entry ({i},{j}) of {m} is not rational")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(d: &XiDecomposition) -> [i64; 4] {
        d.integer.clone().map(|x| i64::try_from(x).unwrap())
    }

    fn inv_sqrt2_cubed(k: i64) -> DyadicGaussian {
        DyadicGaussian::new(k, 0, 3)
    }

    #[test]
    fn printed_n4_decompositions() {
        assert_eq!(ints(&xi_closed_decomposition(3, 1).unwrap()), [2, 0, 1, 1]);
        assert_eq!(ints(&xi_closed_decomposition(4, 0).unwrap()), [1, 0, 0, 0]);
        assert_eq!(ints(&xi_closed_decomposition(2, 2).unwrap()), [-1, 1, 0, 0]);
        assert!(worked_examples().unwrap().iter().all(|w| w.holds));
    }

    #[test]
    fn oracle_small_words() {
        let (p, q) = (coin_constant(CoinName::P), coin_constant(CoinName::Q));
        assert_eq!(xi_oracle(1, 0).unwrap(), p);
        let p3q = &(&(&p * &p) * &p) * &q;
        let p2qp = &(&(&p * &p) * &q) * &p;
        let pqp2 = &(&(&p * &q) * &p) * &p;
        let qp3 = &(&(&q * &p) * &p) * &p;
        assert_eq!(xi_oracle(3, 1).unwrap(), &(&(&p3q + &p2qp) + &pqp2) + &qp3);
        assert_eq!(xi_oracle(3, 1).unwrap(), xi_closed(3, 1).unwrap());
    }

    #[test]
    fn empty_word_and_cap() {
        assert_eq!(xi_closed(0, 0), Err(WalkError::EmptyWord));
        assert_eq!(xi_oracle(0, 0), Err(WalkError::EmptyWord));
        assert_eq!(coefficients(0, 0), Err(WalkError::EmptyWord));
        assert_eq!(xi_oracle(9, 8), Err(WalkError::OracleCap { len: 17, cap: 16 }));
    }

    #[test]
    fn boundary_coefficients() {
        let c = coefficients(4, 0).unwrap();
        assert_eq!((c.p(), c.q(), c.r(), c.s()), (inv_sqrt2_cubed(1), DyadicGaussian::zero(), DyadicGaussian::zero(), DyadicGaussian::zero()));
        let c = coefficients(0, 4).unwrap();
        assert_eq!((c.p(), c.q()), (DyadicGaussian::zero(), inv_sqrt2_cubed(-1)));
        let c = coefficients(2, 2).unwrap();
        assert_eq!((c.p(), c.q(), c.r(), c.s()), (inv_sqrt2_cubed(-1), inv_sqrt2_cubed(1), DyadicGaussian::zero(), DyadicGaussian::zero()));
    }

    #[test]
    fn both_closed_routes_agree() {
        for n in 1..=30u32 {
            for l in 0..=n {
                assert_eq!(coefficients(l, n - l).unwrap(), xi_closed_decomposition(l, n - l).unwrap(), "({l},{})", n - l);
            }
        }
    }

    #[test]
    fn cluster_examples() {
        assert_eq!(cluster_count(ClusterKind::P, 3, 1, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(cluster_count(ClusterKind::R, 1, 1, 1).unwrap(), BigUint::from(1u32));
        assert!(matches!(cluster_count(ClusterKind::P, 1, 3, 1), Err(WalkError::GammaOutOfRange { kind: 'p', .. })));
        assert!(cluster_count(ClusterKind::S, 3, 3, 4).is_err());
        assert!(cluster_count(ClusterKind::Q, 2, 2, 0).is_err());
        assert_eq!("r".parse::<ClusterKind>().unwrap(), ClusterKind::R);
    }

    #[test]
    fn masks_enumerate_binomially() {
        assert_eq!(words_with_q_count(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(words_with_q_count(16, 8).len(), 12870);
        assert_eq!(words_with_q_count(3, 0), vec![0]);
        assert_eq!(words_with_q_count(5, 5), vec![0b11111]);
    }

    #[test]
    fn difference_matrix_examples() {
        let offdiag = |s: u32| Mat2::new(DyadicGaussian::zero(), DyadicGaussian::new(1, 0, s), DyadicGaussian::new(1, 0, s), DyadicGaussian::zero());
        // (1/2)^{n-1} [[0,1],[1,0]]
        assert_eq!(difference_matrix(5, 0).unwrap(), offdiag(8));
        assert_eq!(difference_matrix(1, 0).unwrap(), offdiag(0));
        assert!(difference_matrix(3, 3).unwrap().is_zero());
        let d = difference_matrix(3, 1).unwrap();
        assert!(d.trace().is_zero() && d.is_symmetric());
        assert!(!d.is_zero());
    }

    #[test]
    fn quadratic_form_n1() {
        let qf = quadratic_form(1).unwrap();
        let half = |a: i64, b: i64, c: i64, d: i64| Mat2::new(DyadicGaussian::new(a, 0, 2), DyadicGaussian::new(b, 0, 2), DyadicGaussian::new(c, 0, 2), DyadicGaussian::new(d, 0, 2));
        assert_eq!(qf.get(-1), Some(&half(1, 1, 1, 1)));
        assert_eq!(qf.get(1), Some(&half(1, -1, -1, 1)));
        assert_eq!(qf.sum(), CoinMatrix::identity());
        assert!(qf.is_positive_semidefinite());
        assert_eq!(quadratic_form(0), Err(WalkError::EmptyWord));
    }

    #[test]
    fn gram_double_sum_matches_products() {
        for n in 1..=14u32 {
            for l in 0..=n {
                assert_eq!(gram_closed(l, n - l).unwrap(), gram(l, n - l).unwrap(), "({l},{})", n - l);
            }
        }
    }
}
