//! Expectation coefficients and moments of the limit distribution.
//!
//! `E(X_n^φ) = −a_n(|α|² − |β|²) − b_n(αβ̄ + ᾱβ)`, with `a_n`, `b_n` read off
//! `A_n = Σ_k k·M_k`. In the symmetric case `X_n/n` converges weakly to a
//! law on `(−1/√2, 1/√2)` with density `1/(π(1 − x²)√(1 − 2x²))`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{render_rational, Real, RealSqrt2, Scalar};
use crate::engine::QubitState;
use crate::error::{Result, WalkError};
use crate::par::*;
use crate::pascal::{entry_rational, quadratic_form};

const QUADRATURE_NODES: usize = 64;

/// `a_n`, `b_n` for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub n: u32,
    pub a: BigRational,
    pub b: BigRational,
}

impl LinearForm {
    pub fn expectation<S: Scalar>(&self, phi: &QubitState<S>) -> S::Real {
        -(S::Real::from_rational(&self.a) * phi.population_difference()) - S::Real::from_rational(&self.b) * phi.coherence()
    }
}

pub fn expectation_form(n: u32) -> Result<LinearForm> {
    let first = quadratic_form(n)?.first_moment();
    let [a11, a12, a21, a22] = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(i, j)| entry_rational(&first, i, j));
    let (a11, a12, a21, a22) = (a11?, a12?, a21?, a22?);
    if a11 != -a22.clone() {
        return Err(WalkError::Consistency(format!("A_{n} is not trace free: {} vs {}", a11, a22)));
    }
    if a12 != a21 {
        return Err(WalkError::Consistency(format!("A_{n} is not symmetric: {} vs {}", a12, a21)));
    }
    Ok(LinearForm { n, a: -a11, b: -a12 })
}

/// `expectation_form(1..=n_max)`, computed in parallel.
pub fn expectation_table(n_max: u32) -> Result<Vec<LinearForm>> {
    (1..=n_max).into_par_iter().map(expectation_form).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub n: u32,
    /// `b_{n+1}`.
    pub lhs: String,
    /// `a_n + 1`.
    pub rhs: String,
    pub holds: bool,
}

/// Tests `b_{n+1} = a_n + 1` for every `n ≤ n_max`.
pub fn conjecture_check(n_max: u32) -> Result<Vec<ConjectureRow>> {
    if n_max == 0 {
        return Err(WalkError::EmptyHorizon);
    }
    let table = expectation_table(n_max + 1)?;
    Ok(table
        .windows(2)
        .map(|w| {
            let rhs = &w[0].a + BigRational::one();
            ConjectureRow { n: w[0].n, lhs: render_rational(&w[1].b), rhs: render_rational(&rhs), holds: w[1].b == rhs }
        })
        .collect())
}

/// `E((Z^φ)^m)` for `φ` in the symmetric class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitMoment {
    pub order: u32,
    pub value: RealSqrt2,
}

impl LimitMoment {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn central_binomial(k: u32) -> BigInt {
    // C(2k, k) = Π_{j=1}^{k} (k + j)/j, exact at every step
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(k + j) / BigInt::from(j))
}

/// `Σ_{k<n} C(2k,k)/8^k`.
fn partial_series(n: u32) -> BigRational {
    (0..n).fold(BigRational::zero(), |acc, k| {
        acc + BigRational::new(central_binomial(k), BigInt::from(8).pow(k))
    })
}

/// Odd orders vanish; `E(Z^{2n}) = 1 − (1/√2)·Σ_{k<n} C(2k,k)/8^k`.
pub fn limit_moment(m: u32) -> LimitMoment {
    let value = if m % 2 == 1 {
        RealSqrt2::rational(BigRational::zero())
    } else {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        RealSqrt2::new(BigRational::one(), -(partial_series(m / 2) * half))
    };
    LimitMoment { order: m, value }
}

/// Gauss–Legendre evaluation of the moment after `x = sin θ/√2`:
/// `E(Z^m) = 2^{(3−m)/2}/π · ∫₀^{π/2} sin^m θ/(1 + cos²θ) dθ`.
pub fn moment_quadrature(m: u32) -> Result<f64> {
    if m % 2 == 1 {
        return Err(WalkError::OddOrder(m));
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(QUADRATURE_NODES).expect("nonzero"));
    let integral = rule.integrate(0.0, FRAC_PI_2, |t: f64| {
        let c = t.cos();
        t.sin().powi(m as i32) / (1.0 + c * c)
    });
    Ok(2f64.powf((3.0 - f64::from(m)) / 2.0) / PI * integral)
}

/// `Σ_p c_p·π^p` with coefficients in Q(√2).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiPolynomial {
    terms: BTreeMap<i32, RealSqrt2>,
}

impl PiPolynomial {
    pub fn monomial(coeff: RealSqrt2, power: i32) -> Self {
        let mut p = Self::default();
        p.add_term(power, coeff);
        p
    }

    fn add_term(&mut self, power: i32, coeff: RealSqrt2) {
        let entry = self.terms.entry(power).or_insert_with(RealSqrt2::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, c) in &other.terms {
            out.add_term(p, c.clone());
        }
        out
    }

    /// Multiply by `c·π^power`.
    pub fn times(&self, c: &RealSqrt2, power: i32) -> Self {
        let mut out = Self::default();
        for (&p, coeff) in &self.terms {
            out.add_term(p + power, coeff.clone() * c);
        }
        out
    }

    /// The coefficient when the value is free of `π`.
    pub fn pi_free(&self) -> Option<RealSqrt2> {
        match self.terms.len() {
            0 => Some(RealSqrt2::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, power: i32) -> Option<&RealSqrt2> {
        self.terms.get(&power)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JStep {
    pub n: u32,
    /// `J_n = ∫₀^{π/2} sin^{2n}θ/(1 + cos²θ) dθ · 2^{−n}`, as a multiple of π.
    pub j: PiPolynomial,
    /// `2√2·J_n/π`.
    pub moment: RealSqrt2,
    pub matches_closed_form: bool,
}

/// Builds `J_n` from `J₀ = π/(2√2)` and
/// `J_{n+1} − J_n = −π·C(2n,n)/2^{3n+2}`, maps each back to `E(Z^{2n})`
/// and compares with [`limit_moment`].
pub fn j_recursion(n_max: u32) -> Result<Vec<JStep>> {
    if n_max == 0 {
        return Err(WalkError::EmptyHorizon);
    }
    // 1/(2√2) = √2/4
    let mut j = PiPolynomial::monomial(RealSqrt2::new(BigRational::zero(), BigRational::new(1.into(), 4.into())), 1);
    let two_sqrt2 = RealSqrt2::new(BigRational::zero(), BigRational::from_integer(2.into()));
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        if n > 0 {
            let k = n - 1;
            let delta = BigRational::new(-central_binomial(k), BigInt::from(2).pow(3 * k + 2));
            j = j.add(&PiPolynomial::monomial(RealSqrt2::rational(delta), 1));
        }
        let moment = j
            .times(&two_sqrt2, -1)
            .pi_free()
            .ok_or_else(|| WalkError::Consistency(format!("π does not cancel in E(Z^{})", 2 * n)))?;
        let matches_closed_form = moment == limit_moment(2 * n).value;
        out.push(JStep { n, j: j.clone(), moment, matches_closed_form });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DyadicGaussian;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_coefficients() {
        let f = expectation_form(1).unwrap();
        assert_eq!((f.a.clone(), f.b.clone()), (q(0, 1), q(1, 1)));
        let f = expectation_form(3).unwrap();
        assert_eq!((f.a, f.b), (q(1, 2), q(1, 1)));
        assert_eq!(expectation_form(9).unwrap().a, q(293, 128));
        assert_eq!(expectation_form(10).unwrap().b, q(421, 128));
    }

    #[test]
    fn form_reproduces_walk_mean() {
        let phi = QubitState::<DyadicGaussian>::left();
        let e3 = expectation_form(3).unwrap().expectation(&phi);
        assert_eq!(e3, RealSqrt2::from_ratio(-1, 2));
    }

    #[test]
    fn conjecture_small() {
        let rows = conjecture_check(10).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.holds));
        assert_eq!((rows[2].lhs.as_str(), rows[2].rhs.as_str()), ("3/2", "3/2"));
        assert_eq!(rows[8].lhs, "421/128");
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(limit_moment(0).value, RealSqrt2::one());
        assert_eq!(limit_moment(2).value, RealSqrt2::new(q(1, 1), q(-1, 2)));
        assert!(limit_moment(3).value.is_zero());
        assert_eq!(central_binomial(5), BigInt::from(252));
    }

    #[test]
    fn quadrature_matches() {
        assert!((moment_quadrature(0).unwrap() - 1.0).abs() < 1e-10);
        assert!((moment_quadrature(2).unwrap() - (2.0 - 2f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((moment_quadrature(10).unwrap() - limit_moment(10).to_f64()).abs() < 1e-8);
        assert_eq!(moment_quadrature(3), Err(WalkError::OddOrder(3)));
    }

    #[test]
    fn recursion_first_step() {
        let steps = j_recursion(15).unwrap();
        // J₁ = (√2 − 1)π/4
        assert_eq!(steps[1].j.coefficient(1), Some(&RealSqrt2::new(q(-1, 4), q(1, 4))));
        assert_eq!(steps[1].moment, RealSqrt2::new(q(1, 1), q(-1, 2)));
        assert!(steps.iter().all(|s| s.matches_closed_form));
    }

    #[test]
    fn stray_pi_is_detected() {
        let p = PiPolynomial::monomial(RealSqrt2::one(), 1).add(&PiPolynomial::monomial(RealSqrt2::one(), 0));
        assert_eq!(p.pi_free(), None);
        assert_eq!(PiPolynomial::monomial(RealSqrt2::one(), 1).pi_free(), None);
    }
}
