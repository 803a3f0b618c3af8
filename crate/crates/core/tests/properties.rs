use proptest::prelude::*;

use pseudomode_control::control::{optimize, random_field, OptimOptions, PopulationTargetProblem};
use pseudomode_control::dynamics::{
    accumulated_propagator, constant_propagator, propagate, propagate_final, Matrix2, ReducedState,
    SystemParams, C64,
};
use pseudomode_control::shapes::{render, ShapeSpec};
use pseudomode_control::ControlField;

fn params() -> impl Strategy<Value = SystemParams> {
    (0.0..5.0f64, 0.2..3.0f64).prop_map(|(p, q)| SystemParams::new(p, q).unwrap())
}

fn field(max_len: usize) -> impl Strategy<Value = ControlField> {
    (
        0.005..0.1f64,
        prop::collection::vec(-20.0..20.0f64, 1..max_len),
    )
        .prop_map(|(dt, s)| ControlField::new(dt, s).unwrap())
}

fn initial() -> impl Strategy<Value = ReducedState> {
    prop_oneof![
        Just(ReducedState::excited()),
        Just(ReducedState::bath_excited())
    ]
}

fn close(a: &Matrix2, b: &Matrix2, tol: f64) -> bool {
    a.entries()
        .iter()
        .zip(b.entries())
        .all(|(x, y)| (x - y).norm() <= tol)
}

/// `exp(Mt)` written as `e^{μt}(cosh(Ωt/2) I + sinh(Ωt/2)/(Ω/2) B)` with the
/// root taken as `-Ω`.
fn propagator_negated_root(params: &SystemParams, omega: f64, t: f64) -> Matrix2 {
    let a = C64::new(params.q, -omega);
    let root = -(a * a - 4.0 * params.p * params.p).sqrt();
    let half = root * t / 2.0;
    let sinhc = if half.norm() < 1e-8 {
        C64::new(t / 2.0, 0.0)
    } else {
        half.sinh() / root
    };
    let pref = (C64::new(-params.q, -omega) * t / 2.0).exp();
    let ch = half.cosh();
    Matrix2 {
        u11: pref * (ch + a * sinhc),
        u12: pref * (-2.0 * params.p * sinhc),
        u21: pref * (2.0 * params.p * sinhc),
        u22: pref * (ch - a * sinhc),
    }
}

fn single_step(omega: f64, t: f64) -> ControlField {
    if t > 0.0 {
        ControlField::constant(omega, t, 1).unwrap()
    } else {
        ControlField::empty(1.0).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn determinant_law(params in params(), field in field(60)) {
        let n = field.len();
        let u = accumulated_propagator(&params, &field, n);
        let t = n as f64 * field.dt();
        let w: f64 = field.samples().iter().sum::<f64>() * field.dt();
        let expected = C64::new(-params.q * t, -w).exp();
        prop_assert!((u.det() - expected).norm() <= 1e-9);
    }

    #[test]
    fn composition(params in params(), w1 in -20.0..20.0f64, w2 in -20.0..20.0f64,
                   t1 in 0.0..2.0f64, t2 in 0.0..2.0f64, s0 in initial()) {
        let u1 = constant_propagator(&params, w1, t1).unwrap();
        let u2 = constant_propagator(&params, w2, t2).unwrap();
        let composed = u2.apply(u1.apply(s0.as_array()));
        let mid = propagate_final(&params, &single_step(w1, t1), s0);
        let end = propagate_final(&params, &single_step(w2, t2), mid);
        prop_assert!((end.c1 - composed[0]).norm() <= 1e-12);
        prop_assert!((end.y - composed[1]).norm() <= 1e-12);
    }

    #[test]
    fn branch_independence(params in params(), omega in -20.0..20.0f64, t in 0.0..3.0f64) {
        let u = constant_propagator(&params, omega, t).unwrap();
        let v = propagator_negated_root(&params, omega, t);
        prop_assert!(close(&u, &v, 1e-12), "{u:?} vs {v:?}");
        prop_assert!((u.u21 + u.u12).norm() <= 1e-15);
    }

    #[test]
    fn physicality(params in params(), field in field(200), s0 in initial()) {
        let traj = propagate(&params, &field, s0);
        for s in &traj.states {
            prop_assert!(s.population() <= 1.0 + 1e-9);
            prop_assert!(s.c1.norm_sqr() + s.y.norm_sqr() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn off_diagonal_below_one(params in params(), omega in -20.0..20.0f64, t in 0.0..10.0f64) {
        let u = constant_propagator(&params, omega, t).unwrap();
        prop_assert!(u.u12.norm() < 1.0);
    }

    #[test]
    fn rendered_fields_respect_bound(omega_max in 0.0..60.0f64, horizon in 0.05..5.0f64,
                                     theta in 0.5..30.0f64, kind in 0..4usize) {
        let shape = match kind {
            0 => ShapeSpec::Constant { omega_max },
            1 => ShapeSpec::Sinusoid { omega_max, theta: Some(theta) },
            2 => ShapeSpec::SquareWave { omega_max, period: Some(theta.recip()) },
            _ => ShapeSpec::TwoPiece { omega_max, t_switch: horizon / 2.0, omega_a: omega_max, omega_b: -omega_max },
        };
        let f = render(&shape, 0.01, horizon).unwrap();
        prop_assert!(f.respects(omega_max));
    }

    #[test]
    fn mirror_symmetry_of_population(params in params(), field in field(60), s0 in initial()) {
        let mut mirrored = field.clone();
        for w in mirrored.samples_mut() {
            *w = -*w;
        }
        let a = propagate_final(&params, &field, s0);
        let b = propagate_final(&params, &mirrored, s0);
        prop_assert!((a.population() - b.population()).abs() <= 1e-12);
        prop_assert!((a.c1 - b.c1.conj()).norm() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn optimized_fields_stay_in_box(hi in 0.5..12.0f64, frac in -1.0..1.0f64, target in 0.0..1.0f64, seed in 0..1000u64) {
        let params = SystemParams::new(5f64.sqrt(), 1.0).unwrap();
        let lo = frac * hi;
        let problem = PopulationTargetProblem::new(params, ReducedState::excited(), 0.6, target, Some(hi))
            .unwrap()
            .with_omega_min(lo)
            .unwrap();
        let opts = OptimOptions { max_iters: 40, ..Default::default() };
        let run = optimize(&problem, &random_field(&problem, seed), &opts).unwrap();
        prop_assert!(run.field.within(lo, hi));
        prop_assert!(run.cost_history.windows(2).all(|c| c[1] <= c[0]));
    }
}
