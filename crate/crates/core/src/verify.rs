//! The published values and the end-to-end checks run against them.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{ComplexSqrt2, DyadicGaussian, Real, RealSqrt2};
use crate::engine::{distribution, evolve, evolve_circulant, trajectory, QubitState};
use crate::error::Result;
use crate::moments::{conjecture_check, expectation_table, j_recursion, limit_moment, moment_quadrature};
use crate::par::*;
use crate::pascal::{quadratic_form, worked_examples, xi_closed, xi_oracle};
use crate::symmetry::{is_perp, lemma1_residuals, theorem2_sweep, DEFAULT_HORIZON, SEPARATION_HORIZON};

/// `a_1..a_10` as printed.
pub const TABLE_A: [(i64, i64); 10] =
    [(0, 1), (0, 1), (1, 2), (1, 1), (9, 8), (5, 4), (27, 16), (17, 8), (293, 128), (157, 64)];

/// `b_1..b_10` as printed.
pub const TABLE_B: [(i64, i64); 10] =
    [(1, 1), (1, 1), (1, 1), (3, 2), (2, 1), (17, 8), (9, 4), (43, 16), (25, 8), (421, 128)];

/// The printed `(a_n, b_n)`, for `1 ≤ n ≤ 10`.
pub fn tabulated_coefficients(n: u32) -> Option<(BigRational, BigRational)> {
    let i = usize::try_from(n).ok()?.checked_sub(1)?;
    let (&(an, ad), &(bn, bd)) = (TABLE_A.get(i)?, TABLE_B.get(i)?);
    Some((ratio(an, ad), ratio(bn, bd)))
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

fn timed(id: u8, title: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(budget) = budget {
        if elapsed > budget {
            passed = false;
            detail.push_str(&format!("; over the {} s budget", budget.as_secs()));
        }
    }
    CriterionResult { id, title, passed, detail, seconds: elapsed.as_secs_f64() }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn coefficient_table() -> CriterionResult {
    timed(1, "expectation coefficients a_1..a_10, b_1..b_10", Some(Duration::from_secs(5)), || {
        let table = expectation_table(10)?;
        let mut mismatches = Vec::new();
        for f in &table {
            let (a, b) = tabulated_coefficients(f.n).expect("n <= 10");
            if f.a != a {
                mismatches.push(format!("a_{} = {}", f.n, f.a));
            }
            if f.b != b {
                mismatches.push(format!("b_{} = {}", f.n, f.b));
            }
        }
        Ok((mismatches.is_empty(), if mismatches.is_empty() { "20/20 equal".into() } else { mismatches.join(", ") }))
    })
}

pub fn closed_form_vs_oracle() -> CriterionResult {
    timed(2, "closed form of Xi(l,m) equals the word sum for 1 <= l+m <= 12", Some(Duration::from_secs(30)), || {
        let pairs: Vec<(u32, u32)> = (1..=12u32).flat_map(|n| (0..=n).map(move |l| (l, n - l))).collect();
        let bad: Vec<String> = pairs
            .par_iter()
            .map(|&(l, m)| Ok((l, m, xi_closed(l, m)? == xi_oracle(l, m)?)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|(_, _, ok)| !ok)
            .map(|(l, m, _)| format!("({l},{m})"))
            .collect();
        Ok((bad.is_empty() && pairs.len() == 90, format!("{} of {} pairs agree", pairs.len() - bad.len(), pairs.len())))
    })
}

pub fn printed_decompositions() -> CriterionResult {
    timed(3, "printed n = 4 decompositions", None, || {
        let examples = worked_examples()?;
        let bad: Vec<String> = examples
            .iter()
            .filter(|w| !w.holds)
            .map(|w| format!("{:?} as ({},{})", w.printed_label, w.l, w.m))
            .collect();
        Ok((bad.is_empty(), if bad.is_empty() { format!("{} of {} match", examples.len(), examples.len()) } else { bad.join(", ") }))
    })
}

/// `(1, ±i)/√2` and each times `i`, `−1` and `(1 + i)/√2`.
pub fn lemma_states() -> Vec<QubitState<DyadicGaussian>> {
    let phases = [DyadicGaussian::new(0, 1, 0), DyadicGaussian::from_int(-1), DyadicGaussian::new(1, 1, 1)];
    [QubitState::perp_plus(), QubitState::perp_minus()]
        .into_iter()
        .flat_map(|base| {
            let variants: Vec<_> = phases.iter().map(|p| base.with_phase(p).expect("unit phase")).collect();
            std::iter::once(base).chain(variants)
        })
        .collect()
}

pub fn mirror_identity() -> CriterionResult {
    timed(4, "mirror identity with zero residual for n <= 100", None, || {
        let states = lemma_states();
        let failures: Vec<String> = states
            .par_iter()
            .filter(|phi| !lemma1_residuals(phi, 100).iter().all(|r| r.vanishes()))
            .map(|phi| phi.render())
            .collect();
        Ok((failures.is_empty(), format!("{} states x 101 times, {} failing", states.len(), failures.len())))
    })
}

const PRIMITIVE_TRIPLES: [(i64, i64, i64); 11] = [
    (3, 4, 5),
    (5, 12, 13),
    (8, 15, 17),
    (7, 24, 25),
    (20, 21, 29),
    (12, 35, 37),
    (9, 40, 41),
    (28, 45, 53),
    (11, 60, 61),
    (16, 63, 65),
    (33, 56, 65),
];

/// Unit-modulus Gaussian rationals: the four units and `(±a ± bi)/c`,
/// `(±b ± ai)/c` for the triples above.
pub fn rational_phases() -> Vec<ComplexSqrt2> {
    let mut out = vec![
        ComplexSqrt2::gaussian(1, 0, 1),
        ComplexSqrt2::gaussian(0, 1, 1),
        ComplexSqrt2::gaussian(-1, 0, 1),
        ComplexSqrt2::gaussian(0, -1, 1),
    ];
    for &(a, b, c) in &PRIMITIVE_TRIPLES {
        for (x, y) in [(a, b), (b, a)] {
            for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(ComplexSqrt2::gaussian(sx * x, sy * y, c));
            }
        }
    }
    out
}

/// States `((a + bi)/d, (c + ei)/d)` with `a² + b² + c² + e² = d²`, in a
/// fixed order.
pub fn quadruple_states(count: usize) -> Vec<QubitState<ComplexSqrt2>> {
    let mut out = Vec::with_capacity(count);
    for d in 1i64.. {
        for a in -d..=d {
            for b in -d..=d {
                for c in -d..=d {
                    let rest = d * d - a * a - b * b - c * c;
                    if rest < 0 {
                        continue;
                    }
                    let e = rest.isqrt();
                    if e * e != rest {
                        continue;
                    }
                    for e in if e == 0 { vec![0] } else { vec![e, -e] } {
                        if num_integer::gcd(num_integer::gcd(a, b), num_integer::gcd(c, e)) != 1 {
                            continue;
                        }
                        let phi = QubitState::new(ComplexSqrt2::gaussian(a, b, d), ComplexSqrt2::gaussian(c, e, d))
                            .expect("normalized by construction");
                        out.push(phi);
                        if out.len() == count {
                            return out;
                        }
                    }
                }
            }
        }
    }
    unreachable!()
}

/// 100 members of `Φ⊥` (rational phases on both branches) followed by 100
/// states from rational quadruples that are not.
pub fn sweep_states() -> Vec<QubitState<ComplexSqrt2>> {
    let phases = rational_phases();
    let bases = [QubitState::<ComplexSqrt2>::perp_plus(), QubitState::<ComplexSqrt2>::perp_minus()];
    let members = phases
        .iter()
        .take(50)
        .flat_map(|p| bases.iter().map(move |b| b.with_phase(p).expect("unit phase")));
    let others = quadruple_states(400).into_iter().filter(|phi| !is_perp(phi)).take(100);
    members.chain(others).collect()
}

pub fn class_equality() -> CriterionResult {
    timed(5, "three-way class agreement on 200 exact states", Some(Duration::from_secs(60)), || {
        let states = sweep_states();
        let members = states.iter().filter(|p| is_perp(p)).count();
        let short = theorem2_sweep(&states, SEPARATION_HORIZON)?;
        let long = theorem2_sweep(&states, DEFAULT_HORIZON)?;
        let late_rejection = long.states.iter().filter(|c| !c.in_perp && c.first_violation_n.is_none_or(|n| n > SEPARATION_HORIZON)).count();
        let passed = states.len() == 200 && members > 0 && members < 200 && short.agree && long.agree && late_rejection == 0;
        Ok((
            passed,
            format!(
                "{} states ({members} in the orthogonal class); horizon {SEPARATION_HORIZON}: {} disagree; horizon {DEFAULT_HORIZON}: {} disagree",
                states.len(),
                short.disagreements().count(),
                long.disagreements().count()
            ),
        ))
    })
}

pub fn limit_moments() -> CriterionResult {
    timed(6, "limit moments: closed form, quadrature, J recursion", None, || {
        let second = limit_moment(2).value == RealSqrt2::new(ratio(1, 1), ratio(-1, 2));
        let mut worst = 0f64;
        for n in 0..=7 {
            let diff = (moment_quadrature(2 * n)? - limit_moment(2 * n).to_f64()).abs();
            worst = worst.max(diff);
        }
        let steps = j_recursion(15)?;
        let recursion = steps.len() == 16 && steps.iter().all(|s| s.matches_closed_form);
        Ok((
            second && worst <= 1e-8 && recursion,
            format!("E(Z^2) = (2-sqrt2)/2: {second}; max quadrature error {worst:.1e}; J recursion n <= 15: {recursion}"),
        ))
    })
}

pub fn coefficient_relation() -> CriterionResult {
    timed(7, "b_(n+1) = a_n + 1 for n <= 30 (evidence)", None, || {
        let rows = conjecture_check(30)?;
        let held = rows.iter().filter(|r| r.holds).count();
        Ok((held == rows.len() && rows.len() == 30, format!("{held} of {} hold", rows.len())))
    })
}

/// A fixed list of 20 distinct normalized dyadic states.
pub fn dyadic_states() -> Vec<QubitState<DyadicGaussian>> {
    let mut values = Vec::new();
    for s in 0..=2u32 {
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let v = DyadicGaussian::new(a, b, s);
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
    }
    let mut out = Vec::new();
    for x in &values {
        for y in &values {
            if let Ok(phi) = QubitState::new(x.clone(), y.clone()) {
                out.push(phi);
            }
        }
    }
    // spread the pick over the whole list
    let stride = out.len() / 20;
    out.into_iter().step_by(stride.max(1)).take(20).collect()
}

pub fn conservation() -> CriterionResult {
    timed(8, "exact norm conservation to n = 200; cycle equals line for n < N <= 12", None, || {
        let states = [
            QubitState::<DyadicGaussian>::left(),
            QubitState::right(),
            QubitState::perp_plus(),
            QubitState::new(DyadicGaussian::new(1, 0, 1), DyadicGaussian::new(1, 0, 1))?,
            QubitState::new(DyadicGaussian::new(1, 1, 2), DyadicGaussian::new(1, -1, 2))?,
        ];
        let conserved = states
            .par_iter()
            .all(|phi| trajectory(phi).take(201).all(|s| s.total_probability() == RealSqrt2::one()));
        let mut cycle_cases = 0;
        let mut cycle_ok = true;
        for phi in &states {
            for half in 1..=12u64 {
                for n in 0..half {
                    cycle_cases += 1;
                    cycle_ok &= evolve_circulant(phi, n, half)?.nonzero() == evolve(phi, n).nonzero();
                }
            }
        }
        Ok((conserved && cycle_ok, format!("conservation: {conserved}; cycle vs line: {cycle_ok} over {cycle_cases} cases")))
    })
}

pub fn engine_vs_form() -> CriterionResult {
    timed(9, "walk distribution equals the quadratic form for n <= 14 on 20 states", None, || {
        let states = dyadic_states();
        let forms = (1..=14u32).into_par_iter().map(quadratic_form).collect::<Result<Vec<_>>>()?;
        let mut mismatches = 0;
        for phi in &states {
            for (state, form) in trajectory(phi).skip(1).zip(&forms) {
                let dist = distribution(&state);
                let predicted = form.probabilities(&phi.amplitude());
                let engine: std::collections::BTreeMap<i64, RealSqrt2> = dist.iter().collect();
                mismatches += usize::from(engine != predicted);
            }
        }
        Ok((states.len() == 20 && mismatches == 0, format!("{} states x 14 times, {mismatches} mismatches", states.len())))
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        coefficient_table(),
        closed_form_vs_oracle(),
        printed_decompositions(),
        mirror_identity(),
        class_equality(),
        limit_moments(),
        coefficient_relation(),
        conservation(),
        engine_vs_form(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;

    #[test]
    fn state_sets_have_expected_sizes() {
        assert_eq!(lemma_states().len(), 8);
        assert!(lemma_states().iter().all(is_perp));
        assert_eq!(rational_phases().len(), 92);
        assert!(rational_phases().iter().all(|p| p.norm_sqr() == RealSqrt2::one()));
        let d = dyadic_states();
        assert_eq!(d.len(), 20);
        assert!(d.iter().enumerate().all(|(i, x)| d[..i].iter().all(|y| y != x)));
        let s = sweep_states();
        assert_eq!(s.len(), 200);
        assert_eq!(s.iter().filter(|p| is_perp(p)).count(), 100);
    }

    #[test]
    fn quick_criteria() {
        assert!(coefficient_table().passed);
        assert!(printed_decompositions().passed);
        assert!(coefficient_relation().passed);
    }
}
