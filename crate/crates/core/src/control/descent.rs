//! Projected gradient descent with backtracking line search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::problem::ControlProblem;
use crate::error::{Error, Result};
use crate::field::ControlField;

/// Initialization amplitude for problems without a bound, in units of `q`.
pub const UNBOUNDED_INIT_CAP: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimOptions {
    pub max_iters: usize,
    /// Stop when the cost changed by less than this over `window` iterations.
    pub tol: f64,
    pub window: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub shrink: f64,
    pub max_backtracks: usize,
    /// Optional early exit once the cost falls to this value.
    pub stop_below: Option<f64>,
}

impl Default for OptimOptions {
    fn default() -> Self {
        Self {
            max_iters: 800,
            tol: 1e-9,
            window: 20,
            armijo: 1e-4,
            shrink: 0.5,
            max_backtracks: 50,
            stop_below: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIters,
    Stalled,
    Stationary,
    BelowTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub field: ControlField,
    pub cost: f64,
    pub cost_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_finite(cost: f64, grad: &[f64], iteration: usize) -> Result<()> {
    if !cost.is_finite() {
        return Err(Error::NonFinite(format!(
            "cost = {cost} at iteration {iteration}"
        )));
    }
    if let Some(k) = grad.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFinite(format!(
            "gradient component {k} at iteration {iteration}"
        )));
    }
    Ok(())
}

/// Minimizes `problem`'s cost starting from `field0`.
///
/// Every trial point is projected onto the problem's bounds. The first trial
/// step of each iteration is a Barzilai–Borwein estimate (on the first
/// iteration, a step moving the largest gradient component by a tenth of
/// the bound); it is halved until the Armijo condition holds, so accepted
/// costs never increase.
pub fn optimize<P: ControlProblem + ?Sized>(
    problem: &P,
    field0: &ControlField,
    opts: &OptimOptions,
) -> Result<OptResult> {
    let bounds = problem.bounds();
    if let Some((lo, hi)) = bounds {
        if !field0.within(lo, hi) {
            return Err(Error::InvalidField(format!(
                "initial field outside [{lo}, {hi}]"
            )));
        }
    }
    let project = |f: &mut ControlField| {
        if let Some((lo, hi)) = bounds {
            f.clamp(lo, hi);
        }
    };

    let mut x = field0.clone();
    // History and Armijo tests both use `cost`; the gradient pass builds its
    // propagators differently and may disagree in the last bits.
    let (first_cost, mut grad) = problem.cost_and_gradient(&x);
    check_finite(first_cost, &grad, 0)?;
    let mut cost = problem.cost(&x);
    let mut history = vec![cost];
    let gmax = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let first_move = bounds.map_or(1.0, |(lo, hi)| if hi > lo { 0.05 * (hi - lo) } else { 1.0 });
    let mut step = if gmax > 0.0 { first_move / gmax } else { 1.0 };
    let mut stop_reason = StopReason::MaxIters;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        if opts.stop_below.is_some_and(|s| cost <= s) {
            stop_reason = StopReason::BelowTarget;
            break;
        }
        if grad.iter().all(|g| *g == 0.0) {
            stop_reason = StopReason::Stationary;
            break;
        }

        let mut trial_step = step;
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            let mut trial = x.clone();
            for (w, g) in trial.samples_mut().iter_mut().zip(&grad) {
                *w -= trial_step * g;
            }
            project(&mut trial);
            let decrease: f64 = x
                .samples()
                .iter()
                .zip(trial.samples())
                .zip(&grad)
                .map(|((a, b), g)| g * (a - b))
                .sum();
            if decrease <= 0.0 {
                // projected gradient vanishes
                break;
            }
            let trial_cost = problem.cost(&trial);
            if trial_cost.is_finite() && trial_cost <= cost - opts.armijo * decrease {
                accepted = Some((trial, trial_cost));
                break;
            }
            trial_step *= opts.shrink;
        }
        let Some((next, trial_cost)) = accepted else {
            stop_reason = StopReason::Stationary;
            break;
        };

        let (next_cost, next_grad) = problem.cost_and_gradient(&next);
        iterations += 1;
        check_finite(next_cost, &next_grad, iterations)?;

        let s: Vec<f64> = next
            .samples()
            .iter()
            .zip(x.samples())
            .map(|(a, b)| a - b)
            .collect();
        let y: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        step = if sy > 0.0 {
            dot(&s, &s) / sy
        } else {
            2.0 * trial_step
        };
        step = step.clamp(1e-12, 1e12);

        x = next;
        cost = trial_cost;
        grad = next_grad;
        history.push(cost);

        let n = history.len();
        if n > opts.window && (history[n - 1 - opts.window] - cost).abs() < opts.tol {
            stop_reason = StopReason::Stalled;
            break;
        }
    }
    if opts.stop_below.is_some_and(|s| cost <= s) {
        stop_reason = StopReason::BelowTarget;
    }

    Ok(OptResult {
        field: x,
        cost,
        cost_history: history,
        iterations,
        converged: stop_reason != StopReason::MaxIters,
        stop_reason,
    })
}

/// Uniform random samples on the problem grid, within the bound (or the
/// initialization cap for unbounded problems).
pub fn random_field<P: ControlProblem + ?Sized>(problem: &P, seed: u64) -> ControlField {
    let (n, dt) = problem.grid();
    let (lo, hi) = problem
        .bounds()
        .unwrap_or((-UNBOUNDED_INIT_CAP, UNBOUNDED_INIT_CAP));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
        .collect();
    ControlField::new(dt, samples).expect("valid grid")
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub best: OptResult,
    /// Seed of the best run; `optimize(problem, &random_field(problem, best_seed), opts)`
    /// reproduces it.
    pub best_seed: u64,
    /// Final cost of every restart, in seed order.
    pub costs: Vec<f64>,
}

/// Runs `restarts` optimizations from random fields with seeds
/// `seed, seed + 1, …` in parallel and keeps the lowest final cost (lowest
/// seed on ties). The outcome does not depend on scheduling.
pub fn optimize_with_restarts<P: ControlProblem + ?Sized>(
    problem: &P,
    restarts: usize,
    seed: u64,
    opts: &OptimOptions,
) -> Result<RestartOutcome> {
    if restarts == 0 {
        return Err(Error::InvalidParams("restarts must be >= 1".into()));
    }
    let runs: Vec<OptResult> = (0..restarts as u64)
        .into_par_iter()
        .map(|i| optimize(problem, &random_field(problem, seed.wrapping_add(i)), opts))
        .collect::<Result<_>>()?;
    let costs: Vec<f64> = runs.iter().map(|r| r.cost).collect();
    let (best_index, _) =
        costs.iter().enumerate().fold(
            (0, f64::INFINITY),
            |(bi, bc), (i, &c)| if c < bc { (i, c) } else { (bi, bc) },
        );
    let best = runs.into_iter().nth(best_index).expect("at least one run");
    Ok(RestartOutcome {
        best,
        best_seed: seed.wrapping_add(best_index as u64),
        costs,
    })
}
