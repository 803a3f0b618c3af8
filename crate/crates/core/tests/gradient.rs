use pseudomode_control::control::{
    gradient, population_gradient, ControlProblem, PopulationTargetProblem, SelectivityProblem,
};
use pseudomode_control::dynamics::{ReducedState, SystemParams};
use pseudomode_control::ControlField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn strong() -> SystemParams {
    SystemParams::new(5f64.sqrt(), 1.0).unwrap()
}

fn central_difference<P: ControlProblem>(problem: &P, field: &ControlField, h: f64) -> Vec<f64> {
    (0..field.len())
        .map(|k| {
            let mut plus = field.clone();
            let mut minus = field.clone();
            plus.samples_mut()[k] += h;
            minus.samples_mut()[k] -= h;
            (problem.cost(&plus) - problem.cost(&minus)) / (2.0 * h)
        })
        .collect()
}

fn assert_relative(exact: &[f64], fd: &[f64], tol: f64) {
    for (k, (a, b)) in exact.iter().zip(fd).enumerate() {
        let err = (a - b).abs() / b.abs().max(1e-3);
        assert!(err < tol, "component {k}: {a} vs {b} ({err:.1e})");
    }
}

fn random_field(rng: &mut ChaCha8Rng, n: usize, dt: f64, amp: f64) -> ControlField {
    ControlField::new(dt, (0..n).map(|_| rng.gen_range(-amp..amp)).collect()).unwrap()
}

#[test]
fn population_cost_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for s0 in [ReducedState::excited(), ReducedState::bath_excited()] {
        let field = random_field(&mut rng, 20, 0.02, 10.0);
        let pop = pseudomode_control::dynamics::propagate_final(&strong(), &field, s0).population();
        let target = if pop > 0.5 { pop - 0.3 } else { pop + 0.3 };
        let problem = PopulationTargetProblem::new(strong(), s0, 0.4, target, None).unwrap();
        let fd = central_difference(&problem, &field, 1e-6);
        assert_relative(&gradient(&problem, &field), &fd, 1e-6);
    }
}

#[test]
fn selectivity_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let problem =
        SelectivityProblem::new(strong(), 0.5, 2.0, ReducedState::excited(), 1.225, None).unwrap();
    let (n, dt) = problem.grid();
    let field = random_field(&mut rng, n, dt, 10.0);
    let fd = central_difference(&problem, &field, 1e-6);
    assert_relative(&gradient(&problem, &field), &fd, 1e-6);
}

#[test]
fn selectivity_gradient_is_linear_combination() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let problem =
        SelectivityProblem::new(strong(), 0.3, 1.7, ReducedState::excited(), 1.0, None).unwrap();
    let (n, dt) = problem.grid();
    let field = random_field(&mut rng, n, dt, 8.0);
    let g1 = population_gradient(&problem.params1, &field, ReducedState::excited()).d_population;
    let g2 = population_gradient(&problem.params2, &field, ReducedState::excited()).d_population;
    for (k, g) in gradient(&problem, &field).iter().enumerate() {
        assert!((g - (1.7 * g2[k] - g1[k])).abs() < 1e-14);
    }
}

#[test]
fn decoupled_qubit_has_zero_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let params = SystemParams::new(0.0, 1.0).unwrap();
    let problem =
        PopulationTargetProblem::new(params, ReducedState::excited(), 0.5, 0.3, None).unwrap();
    let (n, dt) = problem.grid();
    let field = random_field(&mut rng, n, dt, 10.0);
    assert!(gradient(&problem, &field).iter().all(|g| g.abs() < 1e-15));
}

#[test]
fn gradient_reports_final_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let field = random_field(&mut rng, 30, 0.02, 5.0);
    let g = population_gradient(&strong(), &field, ReducedState::excited());
    let direct =
        pseudomode_control::dynamics::propagate_final(&strong(), &field, ReducedState::excited());
    // the gradient pass builds each step from the block exponential
    assert!(
        (g.final_state.c1 - direct.c1).norm() < 1e-12
            && (g.final_state.y - direct.y).norm() < 1e-12
    );
    assert_eq!(g.d_population.len(), 30);
}
