use num_complex::Complex64;
use proptest::prelude::*;

use hadamard_walk::engine::{distribution, evolve, QubitState};
use hadamard_walk::moments::expectation_form;
use hadamard_walk::symmetry::{is_perp, is_symmetric_to, mean_violation};
use hadamard_walk::verify::{quadruple_states, rational_phases};
use hadamard_walk::{ComplexSqrt2, DyadicGaussian, Real, RealSqrt2, Scalar};

type Dg = DyadicGaussian;

const TOL: f64 = 1e-12;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= TOL * (1.0 + a.norm().max(b.norm()))
}

fn dyadic() -> impl Strategy<Value = Dg> {
    (-60i64..=60, -60i64..=60, 0u32..=10).prop_map(|(a, b, s)| Dg::new(a, b, s))
}

/// Pairs whose halfpow parities agree, so their sum is representable.
fn addable() -> impl Strategy<Value = (Dg, Dg)> {
    (-60i64..=60, -60i64..=60, -60i64..=60, -60i64..=60, 0u32..=5, 0u32..=5, 0u32..=1).prop_map(|(a, b, c, d, s, t, p)| {
        (Dg::new(a, b, 2 * s + p), Dg::new(c, d, 2 * t + p))
    })
}

fn unit_phase() -> impl Strategy<Value = Dg> {
    prop_oneof![
        Just(Dg::from_int(1)),
        Just(Dg::new(0, 1, 0)),
        Just(Dg::from_int(-1)),
        Just(Dg::new(0, -1, 0)),
        Just(Dg::new(1, 1, 1)),
        Just(Dg::new(1, -1, 1)),
        Just(Dg::new(-1, 1, 1)),
        Just(Dg::new(-1, -1, 1)),
    ]
}

/// Normalized dyadic states: a basis vector times a phase, or two phases
/// scaled by 1/√2 when their parities allow the pair.
fn exact_state() -> impl Strategy<Value = QubitState<Dg>> {
    (unit_phase(), unit_phase(), 0usize..3).prop_filter_map("mixed parity", |(u, v, shape)| {
        let half = Dg::new(1, 0, 1);
        match shape {
            0 => QubitState::new(u, Dg::from_int(0)).ok(),
            1 => QubitState::new(Dg::from_int(0), v).ok(),
            _ => QubitState::new(half.clone() * &u, half * &v).ok(),
        }
    })
}

fn field_state() -> impl Strategy<Value = QubitState<ComplexSqrt2>> {
    let pool = quadruple_states(300);
    (0..pool.len()).prop_map(move |i| pool[i].clone())
}

fn float_state() -> impl Strategy<Value = QubitState<Complex64>> {
    (0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU, 0.0f64..std::f64::consts::TAU).prop_map(|(t, a, b)| {
        let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
        QubitState::new(Complex64::from_polar(c, a), Complex64::from_polar(s, b)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_form_is_idempotent(x in dyadic()) {
        prop_assert!(x.is_canonical());
        let again = Dg::new(x.re_num().clone(), x.im_num().clone(), x.halfpow());
        prop_assert_eq!(again, x);
    }

    #[test]
    fn display_round_trips(x in dyadic()) {
        prop_assert_eq!(x.to_string().parse::<Dg>().unwrap(), x);
    }

    #[test]
    fn field_round_trip(x in dyadic()) {
        prop_assert_eq!(Dg::from_field(&x.to_field()), Some(x.clone()));
        prop_assert!(close(x.to_field().to_complex(), x.to_complex()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn products_agree_with_floats(x in dyadic(), y in dyadic()) {
        prop_assert!(close((x.clone() * &y).to_complex(), x.to_complex() * y.to_complex()));
        prop_assert!(close(x.conj().to_complex(), x.to_complex().conj()));
        prop_assert!(close(x.mul_inv_sqrt2().to_complex(), x.to_complex() * std::f64::consts::FRAC_1_SQRT_2));
    }

    #[test]
    fn sums_agree_with_floats((x, y) in addable()) {
        let sum = x.checked_add(&y);
        prop_assert!(sum.is_some());
        prop_assert!(close(sum.unwrap().to_complex(), x.to_complex() + y.to_complex()));
        prop_assert!(close((x.clone() - &y).to_complex(), x.to_complex() - y.to_complex()));
    }

    #[test]
    fn sqrt2_order_matches_floats(a in -40i64..=40, b in -40i64..=40, c in -40i64..=40, d in -40i64..=40) {
        let x = RealSqrt2::from_ratio(a, 7) + RealSqrt2::from_ratio(b, 5) * RealSqrt2::sqrt2();
        let y = RealSqrt2::from_ratio(c, 3) + RealSqrt2::from_ratio(d, 11) * RealSqrt2::sqrt2();
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x < y, fx < fy);
        }
        prop_assert!(((x.clone() * &y).to_f64() - fx * fy).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_norm_is_conserved(phi in exact_state(), n in 0u64..=200) {
        let state = evolve(&phi, n);
        prop_assert_eq!(state.total_probability(), RealSqrt2::one());
        prop_assert!(state.respects_light_cone());
    }

    #[test]
    fn field_norm_is_conserved(phi in field_state(), n in 0u64..=40) {
        prop_assert_eq!(evolve(&phi, n).total_probability(), RealSqrt2::one());
    }

    #[test]
    fn evolution_is_linear(phi in float_state(), n in 0u64..=60) {
        let (a, b) = (*phi.alpha(), *phi.beta());
        let left = evolve(&QubitState::<Complex64>::left(), n);
        let right = evolve(&QubitState::<Complex64>::right(), n);
        let both = evolve(&phi, n);
        for (k, amp) in both.sites() {
            let (l, r) = (left.amplitude(k).unwrap(), right.amplitude(k).unwrap());
            prop_assert!(close(amp[0], a * l[0] + b * r[0]));
            prop_assert!(close(amp[1], a * l[1] + b * r[1]));
        }
    }

    #[test]
    fn global_phase_is_invisible(phi in exact_state(), phase in unit_phase(), n in 0u64..=50) {
        let turned = phi.with_phase(&phase).unwrap();
        prop_assert_eq!(distribution(&evolve(&phi, n)), distribution(&evolve(&turned, n)));
    }

    #[test]
    fn global_float_phase_is_invisible(phi in float_state(), theta in 0.0f64..std::f64::consts::TAU, n in 0u64..=50) {
        let turned = phi.with_phase(&Complex64::from_polar(1.0, theta)).unwrap();
        let (d0, d1) = (distribution(&evolve(&phi, n)), distribution(&evolve(&turned, n)));
        for (k, p) in d0.iter() {
            prop_assert!((p - d1.probability(k)).abs() < TOL);
        }
    }

    #[test]
    fn orthogonal_states_stay_symmetric(i in 0usize..92, minus in any::<bool>(), n in 1u64..=30) {
        let base = if minus { QubitState::<ComplexSqrt2>::perp_minus() } else { QubitState::perp_plus() };
        let phi = base.with_phase(&rational_phases()[i]).unwrap();
        prop_assert!(is_perp(&phi));
        prop_assert!(is_symmetric_to(&phi, n).unwrap());
    }

    #[test]
    fn non_members_fail_by_time_three(phi in field_state()) {
        if !is_perp(&phi) {
            let first = mean_violation(&phi, 3).unwrap();
            prop_assert!(matches!(first, Some(1) | Some(3)), "{:?}", first);
        }
    }

    #[test]
    fn expectation_is_linear_in_the_two_invariants(phi in field_state(), n in 1u32..=12) {
        let engine = distribution(&evolve(&phi, u64::from(n))).expectation();
        prop_assert_eq!(engine, expectation_form(n).unwrap().expectation(&phi));
    }
}
