//! Discriminating two qubits whose couplings differ by 50% with one shared
//! detuning field.

use pseudomode_control::control::{
    optimize_with_restarts, plateau_onset, selectivity_sweep, OptimOptions, SelectivityProblem,
    SWEEP_TOLERANCE,
};
use pseudomode_control::dynamics::{ReducedState, SystemParams};

fn main() -> pseudomode_control::Result<()> {
    let params = SystemParams::new(5f64.sqrt(), 1.0)?;
    let problem = SelectivityProblem::new(
        params,
        0.5,
        SelectivityProblem::DEFAULT_LAMBDA,
        ReducedState::excited(),
        SelectivityProblem::DEFAULT_T_FINAL,
        None,
    )?;
    let opts = OptimOptions::default();

    let free = problem.populations(&pseudomode_control::control::ControlProblem::zero_field(
        &problem,
    ));
    println!("free evolution: pop1 = {:.4}, pop2 = {:.4}", free.0, free.1);

    let outcome = optimize_with_restarts(&problem, 20, 0, &opts)?;
    let best = &outcome.best;
    let (p1, p2) = problem.populations(&best.field);
    println!(
        "unbounded, 20 restarts: C = {:.5} (seed {})",
        best.cost, outcome.best_seed
    );
    println!(
        "  pop1 = {p1:.4}, pop2 = {p2:.4}, gain = {:.2}",
        problem.gain(&best.field)?
    );
    let samples = best.field.samples();
    let n = samples.len();
    let inner = samples[n / 4..n - n / 4]
        .iter()
        .fold(0.0f64, |m, w| m.max(w.abs()));
    println!(
        "  max |w| = {:.2}, middle half of the steps = {inner:.2}",
        best.field.max_abs()
    );

    let bounds: Vec<f64> = (1..=10).map(f64::from).collect();
    let runs = selectivity_sweep(&problem, &bounds, 4, 0, &opts)?;
    let points: Vec<(f64, f64)> = runs
        .iter()
        .map(|r| (r.omega_max, r.outcome.best.cost))
        .collect();
    for (b, c) in &points {
        println!("  omega_max = {b:>4}: C = {c:.5}");
    }
    if let Some((b, c)) = plateau_onset(&points, SWEEP_TOLERANCE) {
        println!("cost flattens from omega_max = {b} (C = {c:.5})");
    }
    Ok(())
}
