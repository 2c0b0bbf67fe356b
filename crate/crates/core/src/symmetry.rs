//! The mirror identity and the three initial-state classes.
//!
//! `Φ⊥` holds the states with `|α| = |β|` and `αβ̄ + ᾱβ = 0`, `Φ_s` those
//! whose distribution is symmetric in `k ↦ −k` at every time, and `Φ₀` those
//! with zero mean at every time. The two dynamic classes can only be tested
//! up to a finite horizon.

use serde::Serialize;

use crate::arith::{Amplitude, Real, Scalar, FLOAT_TOL};
use crate::engine::{distribution, evolve, trajectory, QubitState, WalkState};
use crate::error::{Result, WalkError};
use crate::par::*;

/// Default number of exact steps used as acceptance evidence.
pub const DEFAULT_HORIZON: u64 = 100;

/// Horizon at which every exact non-member of `Φ⊥` is already rejected.
pub const SEPARATION_HORIZON: u64 = 3;

pub fn is_perp<S: Scalar>(phi: &QubitState<S>) -> bool {
    let zero = S::Real::zero();
    phi.population_difference().approx_eq(&zero, FLOAT_TOL) && phi.coherence().approx_eq(&zero, FLOAT_TOL)
}

/// Which half of `Φ⊥` a state lies in, up to global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `β = iα`, mirrored by `+iJ`.
    Plus,
    /// `β = −iα`, mirrored by `−iJ`.
    Minus,
}

impl Branch {
    pub fn of<S: Scalar>(phi: &QubitState<S>) -> Option<Self> {
        let i_alpha = phi.alpha().clone() * &S::imag_unit();
        if phi.beta().approx_eq(&i_alpha, FLOAT_TOL) {
            Some(Branch::Plus)
        } else if phi.beta().approx_eq(&-i_alpha, FLOAT_TOL) {
            Some(Branch::Minus)
        } else {
            None
        }
    }

    fn unit<S: Scalar>(self) -> S {
        match self {
            Branch::Plus => S::imag_unit(),
            Branch::Minus => -S::imag_unit(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaResidual<R> {
    pub n: u64,
    /// `None` when the state is outside `Φ⊥`; the residual is then measured
    /// against the `+i` branch and carries no meaning.
    pub branch: Option<Branch>,
    /// `max_k ‖Ψ_k − (−1)ⁿ·(±i)·J·Ψ_{−k}‖²`.
    pub residual: R,
}

impl<R: Real> LemmaResidual<R> {
    pub fn applicable(&self) -> bool {
        self.branch.is_some()
    }

    pub fn label(&self) -> &'static str {
        if self.applicable() {
            "ok"
        } else {
            "lemma not applicable"
        }
    }

    pub fn vanishes(&self) -> bool {
        self.applicable() && self.residual.approx_eq(&R::zero(), FLOAT_TOL)
    }
}

fn mirror_residual<S: Scalar>(state: &WalkState<S>, unit: &S) -> S::Real {
    let factor = if state.time() % 2 == 0 { unit.clone() } else { -unit.clone() };
    let zero: Amplitude<S> = [S::zero(), S::zero()];
    state
        .sites()
        .map(|(k, psi)| {
            let mirror = state.amplitude(-k).unwrap_or(&zero);
            // J·(a, b) = (−b, a)
            let image = [-(factor.clone() * &mirror[1]), factor.clone() * &mirror[0]];
            let d0 = psi[0].clone() - &image[0];
            let d1 = psi[1].clone() - &image[1];
            d0.norm_sqr() + d1.norm_sqr()
        })
        .fold(S::Real::zero(), |acc, r| if r > acc { r } else { acc })
}

pub fn lemma1_residual<S: Scalar>(phi: &QubitState<S>, n: u64) -> LemmaResidual<S::Real> {
    let branch = if is_perp(phi) { Branch::of(phi) } else { None };
    let unit = branch.unwrap_or(Branch::Plus).unit::<S>();
    LemmaResidual { n, branch, residual: mirror_residual(&evolve(phi, n), &unit) }
}

/// Residuals at every `n ≤ n_max` from a single trajectory.
pub fn lemma1_residuals<S: Scalar>(phi: &QubitState<S>, n_max: u64) -> Vec<LemmaResidual<S::Real>> {
    let branch = if is_perp(phi) { Branch::of(phi) } else { None };
    let unit = branch.unwrap_or(Branch::Plus).unit::<S>();
    trajectory(phi)
        .take(n_max as usize + 1)
        .map(|state| LemmaResidual { n: state.time(), branch, residual: mirror_residual(&state, &unit) })
        .collect()
}

fn check_horizon(n_max: u64) -> Result<()> {
    if n_max == 0 {
        Err(WalkError::EmptyHorizon)
    } else {
        Ok(())
    }
}

/// First `n ≤ n_max` at which the distribution is not mirror symmetric.
pub fn symmetry_violation<S: Scalar>(phi: &QubitState<S>, n_max: u64) -> Result<Option<u64>> {
    check_horizon(n_max)?;
    Ok(trajectory(phi)
        .skip(1)
        .take(n_max as usize)
        .find(|s| !distribution(s).is_mirror_symmetric(FLOAT_TOL))
        .map(|s| s.time()))
}

/// First `n ≤ n_max` at which `E(X_n) ≠ 0`.
pub fn mean_violation<S: Scalar>(phi: &QubitState<S>, n_max: u64) -> Result<Option<u64>> {
    check_horizon(n_max)?;
    let zero = S::Real::zero();
    Ok(trajectory(phi)
        .skip(1)
        .take(n_max as usize)
        .find(|s| !distribution(s).expectation().approx_eq(&zero, FLOAT_TOL))
        .map(|s| s.time()))
}

pub fn is_symmetric_to<S: Scalar>(phi: &QubitState<S>, n_max: u64) -> Result<bool> {
    Ok(symmetry_violation(phi, n_max)?.is_none())
}

pub fn is_zero_mean_to<S: Scalar>(phi: &QubitState<S>, n_max: u64) -> Result<bool> {
    Ok(mean_violation(phi, n_max)?.is_none())
}

/// Membership of one state in the three classes, to a finite horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassLabel {
    pub phi: String,
    pub in_perp: bool,
    pub symmetric: bool,
    pub zero_mean: bool,
    pub horizon: u64,
    /// Earliest time at which symmetry or zero mean fails.
    pub first_violation_n: Option<u64>,
}

impl ClassLabel {
    pub fn agrees(&self) -> bool {
        self.in_perp == self.symmetric && self.symmetric == self.zero_mean
    }
}

/// Classifies one state, stopping once both dynamic predicates have failed.
pub fn classify<S: Scalar>(phi: &QubitState<S>, n_max: u64) -> Result<ClassLabel> {
    check_horizon(n_max)?;
    let zero = S::Real::zero();
    let (mut sym, mut mean) = (None, None);
    for state in trajectory(phi).skip(1).take(n_max as usize) {
        let dist = distribution(&state);
        if sym.is_none() && !dist.is_mirror_symmetric(FLOAT_TOL) {
            sym = Some(state.time());
        }
        if mean.is_none() && !dist.expectation().approx_eq(&zero, FLOAT_TOL) {
            mean = Some(state.time());
        }
        if sym.is_some() && mean.is_some() {
            break;
        }
    }
    Ok(ClassLabel {
        phi: phi.render(),
        in_perp: is_perp(phi),
        symmetric: sym.is_none(),
        zero_mean: mean.is_none(),
        horizon: n_max,
        first_violation_n: sym.into_iter().chain(mean).min(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub states: Vec<ClassLabel>,
    pub agree: bool,
}

impl SweepReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &ClassLabel> {
        self.states.iter().filter(|c| !c.agrees())
    }
}

/// Classifies every state in parallel. Agreement is only meaningful for
/// exact backends and `n_max ≥ 3`.
pub fn theorem2_sweep<S: Scalar>(states: &[QubitState<S>], n_max: u64) -> Result<SweepReport> {
    check_horizon(n_max)?;
    let states = states.par_iter().map(|phi| classify(phi, n_max)).collect::<Result<Vec<_>>>()?;
    let agree = states.iter().all(ClassLabel::agrees);
    Ok(SweepReport { states, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ComplexSqrt2, DyadicGaussian};
    use num_complex::Complex64;

    type Dg = DyadicGaussian;

    fn diag() -> QubitState<Dg> {
        QubitState::new(Dg::new(1, 0, 1), Dg::new(1, 0, 1)).unwrap()
    }

    #[test]
    fn perp_membership() {
        assert!(is_perp(&QubitState::<Dg>::perp_plus()));
        assert!(is_perp(&QubitState::<Dg>::perp_minus()));
        assert!(!is_perp(&QubitState::<Dg>::left()));
        assert!(!is_perp(&diag()));
        let phase = Complex64::from_polar(1.0, 0.7);
        assert!(is_perp(&QubitState::<Complex64>::perp_plus().with_phase(&phase).unwrap()));
    }

    #[test]
    fn lemma_base_and_branches() {
        let plus = QubitState::<Dg>::perp_plus();
        let r0 = lemma1_residual(&plus, 0);
        assert_eq!(r0.branch, Some(Branch::Plus));
        assert!(r0.residual.is_zero());
        assert!(lemma1_residual(&plus, 50).vanishes());
        let minus = lemma1_residual(&QubitState::<Dg>::perp_minus(), 7);
        assert_eq!(minus.branch, Some(Branch::Minus));
        assert!(minus.vanishes());
    }

    #[test]
    fn lemma_off_class_is_labelled() {
        let r = lemma1_residual(&QubitState::<Dg>::left(), 3);
        assert_eq!(r.label(), "lemma not applicable");
        assert!(!r.vanishes());
        assert!(!r.residual.is_zero());
    }

    #[test]
    fn lemma_with_global_phase() {
        let phase = ComplexSqrt2::gaussian(3, 4, 5);
        let phi = QubitState::<ComplexSqrt2>::perp_minus().with_phase(&phase).unwrap();
        assert!(lemma1_residuals(&phi, 20).iter().all(LemmaResidual::vanishes));
    }

    #[test]
    fn dynamic_predicates() {
        let plus = QubitState::<Dg>::perp_plus();
        assert!(is_symmetric_to(&plus, 100).unwrap());
        assert!(is_zero_mean_to(&plus, 100).unwrap());
        let left = QubitState::<Dg>::left();
        assert_eq!(symmetry_violation(&left, 3).unwrap(), Some(3));
        assert_eq!(mean_violation(&left, 3).unwrap(), Some(3));
        assert!(is_zero_mean_to(&left, 2).unwrap());
        assert!(!is_symmetric_to(&diag(), 3).unwrap());
        assert_eq!(mean_violation(&diag(), 3).unwrap(), Some(1));
        assert_eq!(is_symmetric_to(&left, 0), Err(WalkError::EmptyHorizon));
    }

    #[test]
    fn small_sweep_agrees() {
        let phase = ComplexSqrt2::gaussian(3, 4, 5);
        let to_field = |phi: QubitState<Dg>| phi.convert(Dg::to_field);
        let states = vec![
            to_field(QubitState::left()),
            to_field(QubitState::right()),
            to_field(diag()),
            to_field(QubitState::perp_plus()),
            to_field(QubitState::perp_minus()),
            QubitState::<ComplexSqrt2>::perp_plus().with_phase(&phase).unwrap(),
        ];
        let report = theorem2_sweep(&states, 10).unwrap();
        assert!(report.agree);
        let left = &report.states[0];
        assert_eq!((left.in_perp, left.symmetric, left.zero_mean, left.first_violation_n), (false, false, false, Some(3)));
        let plus = &report.states[3];
        assert_eq!((plus.in_perp, plus.symmetric, plus.zero_mean, plus.first_violation_n), (true, true, true, None));
    }

    #[test]
    fn label_serializes_with_spec_keys() {
        let label = classify(&QubitState::<Dg>::left(), 3).unwrap();
        let v = serde_json::to_value(&label).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["first_violation_n", "horizon", "in_perp", "phi", "symmetric", "zero_mean"]);
    }
}
