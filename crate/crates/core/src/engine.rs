//! Time evolution of the Hadamard walk on the integer line and on the
//! (2N+1)-cycle.
//!
//! One step maps the amplitude field by
//! `Ψ_k ← Q·Ψ_{k−1} + P·Ψ_{k+1}`: the P half moves the walker to the left,
//! the Q half to the right. Since `P·(a, b) = ((a + b)/√2, 0)` and
//! `Q·(a, b) = (0, (a − b)/√2)`, a step only needs additions and one scaling
//! by 1/√2 per component.

use std::collections::BTreeMap;

use crate::arith::{Amplitude, Real, Scalar, FLOAT_TOL};
use crate::error::{Result, WalkError};
use crate::par::*;

/// Sites per step above which the step is split across threads.
const PAR_MIN_SITES: usize = 192;

/// A normalized initial coin state `φ = (α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState<S> {
    alpha: S,
    beta: S,
}

impl<S: Scalar> QubitState<S> {
    /// Fails unless `|α|² + |β|² = 1` (exactly, or within 1e−12 for floats)
    /// and the two amplitudes can be added in the backend.
    pub fn new(alpha: S, beta: S) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.approx_eq(&S::Real::one(), FLOAT_TOL) {
            return Err(WalkError::NotNormalized(norm.render()));
        }
        if !alpha.can_add(&beta) {
            return Err(WalkError::MixedParity(alpha.render(), beta.render()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn from_dyadic(alpha: &crate::DyadicGaussian, beta: &crate::DyadicGaussian) -> Result<Self> {
        Self::new(S::from_dyadic(alpha), S::from_dyadic(beta))
    }

    /// `|L⟩ = (1, 0)`.
    pub fn left() -> Self {
        Self { alpha: S::one(), beta: S::zero() }
    }

    /// `|R⟩ = (0, 1)`.
    pub fn right() -> Self {
        Self { alpha: S::zero(), beta: S::one() }
    }

    /// `(1, i)/√2`.
    pub fn perp_plus() -> Self {
        let a = S::one().mul_inv_sqrt2();
        Self { beta: a.clone() * &S::imag_unit(), alpha: a }
    }

    /// `(1, −i)/√2`.
    pub fn perp_minus() -> Self {
        let a = S::one().mul_inv_sqrt2();
        Self { beta: -(a.clone() * &S::imag_unit()), alpha: a }
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn beta(&self) -> &S {
        &self.beta
    }

    pub fn amplitude(&self) -> Amplitude<S> {
        [self.alpha.clone(), self.beta.clone()]
    }

    /// `e^{iθ}·φ` for a unit-modulus `phase`.
    pub fn with_phase(&self, phase: &S) -> Result<Self> {
        Self::new(phase.clone() * &self.alpha, phase.clone() * &self.beta)
    }

    /// `|α|² − |β|²`.
    pub fn population_difference(&self) -> S::Real {
        self.alpha.norm_sqr() - self.beta.norm_sqr()
    }

    /// `αβ̄ + ᾱβ`.
    pub fn coherence(&self) -> S::Real {
        let ab = self.alpha.clone() * &self.beta.conj();
        ab.re() + ab.re()
    }

    pub fn render(&self) -> String {
        format!("({}, {})", self.alpha.render(), self.beta.render())
    }

    /// Re-express in another backend.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QubitState<T> {
        QubitState { alpha: f(&self.alpha), beta: f(&self.beta) }
    }

    /// Floating copy, renormalized.
    pub fn to_float(&self) -> QubitState<crate::ComplexF> {
        let (a, b) = (self.alpha.to_complex(), self.beta.to_complex());
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        QubitState { alpha: a / norm, beta: b / norm }
    }
}

/// Amplitude field at a fixed time.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState<S> {
    time: u64,
    sites: BTreeMap<i64, Amplitude<S>>,
    cycle: Option<u64>,
}

impl<S: Scalar> WalkState<S> {
    pub fn time(&self) -> u64 {
        self.time
    }

    /// Half-size `N` when evolving on the (2N+1)-cycle.
    pub fn cycle(&self) -> Option<u64> {
        self.cycle
    }

    pub fn amplitude(&self, k: i64) -> Option<&Amplitude<S>> {
        self.sites.get(&k)
    }

    /// Stored sites in ascending order of `k`.
    pub fn sites(&self) -> impl Iterator<Item = (i64, &Amplitude<S>)> {
        self.sites.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Site-to-amplitude map with zero amplitudes dropped.
    pub fn nonzero(&self) -> BTreeMap<i64, Amplitude<S>> {
        self.sites
            .iter()
            .filter(|(_, a)| !(a[0].is_zero() && a[1].is_zero()))
            .map(|(&k, a)| (k, a.clone()))
            .collect()
    }

    pub fn total_probability(&self) -> S::Real {
        self.sites
            .values()
            .fold(S::Real::zero(), |acc, a| acc + a[0].norm_sqr() + a[1].norm_sqr())
    }

    /// True when no amplitude sits outside `[−n, n]` or on the wrong parity.
    pub fn respects_light_cone(&self) -> bool {
        let n = self.time as i64;
        self.sites
            .iter()
            .all(|(&k, a)| (k.abs() <= n && (k - n).rem_euclid(2) == 0) || (a[0].is_zero() && a[1].is_zero()))
    }
}

fn zero_amp<S: Scalar>() -> Amplitude<S> {
    [S::zero(), S::zero()]
}

/// `P·v`, the left-moving half.
fn apply_p<S: Scalar>(v: &Amplitude<S>) -> Amplitude<S> {
    [(v[0].clone() + &v[1]).mul_inv_sqrt2(), S::zero()]
}

/// `Q·v`, the right-moving half.
fn apply_q<S: Scalar>(v: &Amplitude<S>) -> Amplitude<S> {
    [S::zero(), (v[0].clone() - &v[1]).mul_inv_sqrt2()]
}

fn from_left_and_right<S: Scalar>(from_left: Option<&Amplitude<S>>, from_right: Option<&Amplitude<S>>) -> Amplitude<S> {
    // only Q contributes to the lower component and only P to the upper one
    let upper = from_right.map(|v| apply_p(v)[0].clone()).unwrap_or_else(S::zero);
    let lower = from_left.map(|v| apply_q(v)[1].clone()).unwrap_or_else(S::zero);
    [upper, lower]
}

fn map_sites<S, F>(keys: Vec<i64>, f: F) -> BTreeMap<i64, Amplitude<S>>
where
    S: Scalar,
    F: Fn(i64) -> Amplitude<S> + Sync + Send,
{
    if keys.len() >= PAR_MIN_SITES {
        let computed: Vec<(i64, Amplitude<S>)> = keys.into_par_iter().map(|k| (k, f(k))).collect();
        computed.into_iter().collect()
    } else {
        keys.into_iter().map(|k| (k, f(k))).collect()
    }
}

/// Time-0 state: `φ` at the origin.
pub fn initial_state<S: Scalar>(phi: &QubitState<S>) -> WalkState<S> {
    WalkState { time: 0, sites: BTreeMap::from([(0, phi.amplitude())]), cycle: None }
}

/// Note that the light cone grows by one site on each side.
pub fn step<S: Scalar>(state: &WalkState<S>) -> WalkState<S> {
    if let Some(half) = state.cycle {
        return step_cycle(state, half);
    }
    let n = state.time as i64 + 1;
    let keys: Vec<i64> = (-n..=n).step_by(2).collect();
    let sites = map_sites(keys, |k| from_left_and_right(state.sites.get(&(k - 1)), state.sites.get(&(k + 1))));
    WalkState { time: state.time + 1, sites, cycle: None }
}

fn step_cycle<S: Scalar>(state: &WalkState<S>, half: u64) -> WalkState<S> {
    let half = half as i64;
    let size = 2 * half + 1;
    let wrap = |k: i64| (k + half).rem_euclid(size) - half;
    let keys: Vec<i64> = (-half..=half).collect();
    let sites = map_sites(keys, |k| from_left_and_right(state.sites.get(&wrap(k - 1)), state.sites.get(&wrap(k + 1))));
    WalkState { time: state.time + 1, sites, cycle: state.cycle }
}

/// Successive states `Ψ^(0), Ψ^(1), …`.
pub fn trajectory<S: Scalar>(phi: &QubitState<S>) -> impl Iterator<Item = WalkState<S>> {
    std::iter::successors(Some(initial_state(phi)), |s| Some(step(s)))
}

pub fn evolve<S: Scalar>(phi: &QubitState<S>, n: u64) -> WalkState<S> {
    let mut state = initial_state(phi);
    for _ in 0..n {
        state = step(&state);
    }
    state
}

/// Evolution under the circulant operator on sites `−N..=N` with periodic
/// wrap-around. Agrees with [`evolve`] while `n < N`.
pub fn evolve_circulant<S: Scalar>(phi: &QubitState<S>, n: u64, half_size: u64) -> Result<WalkState<S>> {
    if half_size == 0 {
        return Err(WalkError::EmptyCycle);
    }
    let h = half_size as i64;
    let mut sites: BTreeMap<i64, Amplitude<S>> = (-h..=h).map(|k| (k, zero_amp())).collect();
    sites.insert(0, phi.amplitude());
    let mut state = WalkState { time: 0, sites, cycle: Some(half_size) };
    for _ in 0..n {
        state = step(&state);
    }
    Ok(state)
}

/// `P(X_n = k)` together with its two chirality contributions.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<R> {
    time: u64,
    sites: BTreeMap<i64, [R; 2]>,
}

impl<R: Real> Distribution<R> {
    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn probability(&self, k: i64) -> R {
        self.sites.get(&k).map(|[l, r]| l.clone() + r).unwrap_or_else(R::zero)
    }

    /// `(|Ψ_L,k|², |Ψ_R,k|²)`.
    pub fn components(&self, k: i64) -> Option<&[R; 2]> {
        self.sites.get(&k)
    }

    /// `(k, P(X_n = k))` in ascending `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, R)> + '_ {
        self.sites.iter().map(|(&k, [l, r])| (k, l.clone() + r))
    }

    pub fn total(&self) -> R {
        self.iter().fold(R::zero(), |acc, (_, p)| acc + p)
    }

    pub fn expectation(&self) -> R {
        self.iter().fold(R::zero(), |acc, (k, p)| acc + R::from_i64(k) * p)
    }

    /// Smallest `k ≥ 1` with `P(X_n = k) ≠ P(X_n = −k)`, if any.
    pub fn first_asymmetry(&self, tol: f64) -> Option<i64> {
        self.sites
            .keys()
            .copied()
            .filter(|&k| k > 0)
            .find(|&k| !self.probability(k).approx_eq(&self.probability(-k), tol))
    }

    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        self.first_asymmetry(tol).is_none()
    }
}

pub fn distribution<S: Scalar>(state: &WalkState<S>) -> Distribution<S::Real> {
    let sites = state
        .sites
        .iter()
        .map(|(&k, a)| (k, [a[0].norm_sqr(), a[1].norm_sqr()]))
        .collect();
    Distribution { time: state.time, sites }
}

/// `E(X_n) = Σ_k k·P(X_n = k)`.
pub fn expectation<S: Scalar>(state: &WalkState<S>) -> S::Real {
    distribution(state).expectation()
}
