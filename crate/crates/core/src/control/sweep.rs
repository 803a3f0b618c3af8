use super::descent::{optimize_with_restarts, OptimOptions, RestartOutcome};
use super::problem::SelectivityProblem;
use crate::error::Result;

/// Default cost tolerance for [`plateau_onset`].
pub const SWEEP_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub omega_max: f64,
    pub outcome: RestartOutcome,
}

/// Re-optimizes `problem` under each amplitude bound in `bounds`.
pub fn selectivity_sweep(
    problem: &SelectivityProblem,
    bounds: &[f64],
    restarts: usize,
    seed: u64,
    opts: &OptimOptions,
) -> Result<Vec<SweepRun>> {
    bounds
        .iter()
        .map(|&b| {
            let bounded = problem.clone().with_omega_max(Some(b))?;
            let outcome = optimize_with_restarts(&bounded, restarts, seed, opts)?;
            Ok(SweepRun {
                omega_max: b,
                outcome,
            })
        })
        .collect()
}

/// Smallest bound whose cost lies within `tol` of the lowest cost in
/// `points` (`(bound, cost)` pairs). A larger box never raises the optimum,
/// so this is where the cost curve flattens out.
pub fn plateau_onset(points: &[(f64, f64)], tol: f64) -> Option<(f64, f64)> {
    let min = points
        .iter()
        .map(|p| p.1)
        .filter(|c| c.is_finite())
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return None;
    }
    points
        .iter()
        .filter(|p| p.1 <= min + tol)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .copied()
}
