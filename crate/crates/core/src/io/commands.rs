use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use super::output::{
    write_boundaries, write_field, write_grid, write_json, write_multimode_trajectory, write_sweep,
    write_trajectory,
};
use crate::control::{
    optimize_with_restarts, plateau_onset, selectivity_sweep, PopulationTargetProblem,
    SelectivityProblem, REACHED_THRESHOLD, SWEEP_TOLERANCE,
};
use crate::dynamics::{propagate, propagate_multimode};
use crate::error::{Error, Result};
use crate::field::ControlField;
use crate::reachable::{
    classify, map_reachable, CellStatus, DEFAULT_NEAR_THRESHOLD, MAP_STOP_BELOW,
};
use crate::shapes::render;

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Overrides `optimizer.seed`.
    pub seed: Option<u64>,
    /// Report unreached targets through the exit code.
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Unreached,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Unreached => 4,
        }
    }
}

/// 2 for configuration and input problems, 3 for numerical failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonFinite(_) | Error::Fit(_) | Error::UndefinedGain => 3,
        _ => 2,
    }
}

/// Applies the seed override, creates the output directory and writes the
/// config echo. Returns the echoed config and its normalized form.
fn prepare(cfg: &RunConfig, opts: &RunOptions) -> Result<(RunConfig, RunConfig)> {
    let mut cfg = cfg.clone();
    if let Some(seed) = opts.seed {
        cfg.optimizer.seed = seed;
    }
    cfg.validate()?;
    std::fs::create_dir_all(&opts.out)
        .map_err(|e| Error::Io(format!("{}: {e}", opts.out.display())))?;
    std::fs::write(opts.out.join("config.json"), cfg.to_json() + "\n")?;
    let normalized = cfg.normalized();
    Ok((cfg, normalized))
}

fn field_from(cfg: &RunConfig) -> Result<ControlField> {
    match (&cfg.shape, &cfg.samples) {
        (Some(shape), None) => {
            let horizon = cfg
                .horizon
                .ok_or_else(|| Error::Config("a shape needs a horizon".into()))?;
            render(shape, cfg.dt, horizon)
        }
        (None, Some(s)) => {
            let field = ControlField::new(s.dt, s.values.clone())?;
            if let Some(h) = cfg.horizon {
                if (h - field.duration()).abs() > 1e-9 * h.max(1.0) {
                    return Err(Error::Config(format!(
                        "horizon {h} does not match samples duration {}",
                        field.duration()
                    )));
                }
            }
            Ok(field)
        }
        _ => Err(Error::Config(
            "simulate needs exactly one of shape or samples".into(),
        )),
    }
}

fn out(opts: &RunOptions, name: &str) -> PathBuf {
    opts.out.join(name)
}

fn summary_path(opts: &RunOptions) -> PathBuf {
    out(opts, "summary.json")
}

/// Propagates the configured field; writes `trajectory.csv` and `summary.json`.
pub fn cmd_simulate(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome> {
    let start = Instant::now();
    let (_, cfg) = prepare(cfg, opts)?;
    let field = field_from(&cfg)?;
    let check = |pops: &[f64]| match pops.iter().position(|p| !p.is_finite()) {
        Some(k) => Err(Error::NonFinite(format!("population at step {k}"))),
        None => Ok(()),
    };
    let (pops, final_time) = if cfg.n_modes() == 1 {
        let traj = propagate(&cfg.single_params()?, &field, cfg.initial_state()?);
        let pops = traj.populations();
        check(&pops)?;
        write_trajectory(&out(opts, "trajectory.csv"), &traj, &field)?;
        (pops, traj.final_time())
    } else {
        let traj = propagate_multimode(&cfg.multimode_params(), &field, &cfg.initial_multimode()?)?;
        let pops = traj.populations();
        check(&pops)?;
        write_multimode_trajectory(&out(opts, "trajectory.csv"), &traj, &field)?;
        (pops, *traj.times.last().unwrap_or(&0.0))
    };
    write_json(
        &summary_path(opts),
        &json!({
            "command": "simulate",
            "n_steps": field.len(),
            "dt": field.dt(),
            "final_time": final_time,
            "final_pop": pops.last(),
            "mean_pop": mean_trapezoid(&pops, field.dt()),
            "max_abs_omega": field.max_abs(),
            "runtime_s": start.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(Outcome::Success)
}

fn mean_trapezoid(values: &[f64], dt: f64) -> f64 {
    match values.len() {
        0 => f64::NAN,
        1 => values[0],
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            (inner + 0.5 * (values[0] + values[n - 1])) * dt / ((n - 1) as f64 * dt)
        }
    }
}

/// Reachable-set map; writes `grid.csv`, `boundary.csv` and `summary.json`.
pub fn cmd_reachable(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome> {
    let start = Instant::now();
    let (_, cfg) = prepare(cfg, opts)?;
    let params = cfg.single_params()?;
    let grid = cfg.grid_spec()?;
    let mut optim = cfg.optimizer.options();
    optim.stop_below.get_or_insert(MAP_STOP_BELOW);
    let map = map_reachable(&params, &grid, &optim, cfg.optimizer.seed)?;
    write_grid(&out(opts, "grid.csv"), &map)?;
    write_boundaries(&out(opts, "boundary.csv"), &map.prescan)?;
    let counts: BTreeMap<&str, usize> = [
        CellStatus::ConstantReachable,
        CellStatus::Reached,
        CellStatus::Near,
        CellStatus::Unreached,
    ]
    .iter()
    .map(|s| (s.as_str(), map.count(*s)))
    .collect();
    write_json(
        &summary_path(opts),
        &json!({
            "command": "reachable",
            "counts": counts,
            "params": params,
            "grid": grid,
            "symmetric_sweep": map.prescan.symmetric,
            "seed": cfg.optimizer.seed,
            "runtime_s": start.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
struct SelectivityReport {
    omega_max: Option<f64>,
    #[serde(rename = "C")]
    cost: f64,
    #[serde(rename = "G")]
    gain: Option<f64>,
    pop1: f64,
    pop2: f64,
    restarts_used: usize,
    best_seed: u64,
    max_abs_omega: f64,
    costs: Vec<f64>,
}

fn selectivity_report(
    problem: &SelectivityProblem,
    outcome: &crate::control::RestartOutcome,
) -> SelectivityReport {
    let (pop1, pop2) = problem.populations(&outcome.best.field);
    SelectivityReport {
        omega_max: problem.omega_max,
        cost: outcome.best.cost,
        gain: problem.gain(&outcome.best.field).ok(),
        pop1,
        pop2,
        restarts_used: outcome.costs.len(),
        best_seed: outcome.best_seed,
        max_abs_omega: outcome.best.field.max_abs(),
        costs: outcome.costs.clone(),
    }
}

/// Two-qubit selectivity; writes `field.csv` and `summary.json`, plus one
/// `sweep_omega_max_<b>.json` per bound and `sweep.csv` when a bound sweep
/// is configured.
pub fn cmd_selectivity(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome> {
    let start = Instant::now();
    let (_, cfg) = prepare(cfg, opts)?;
    let block = cfg
        .selectivity
        .clone()
        .ok_or_else(|| Error::Config("missing selectivity block".into()))?;
    let problem = SelectivityProblem::new(
        cfg.single_params()?,
        block.alpha,
        block.lambda,
        cfg.initial_state()?,
        block.t_f,
        cfg.optimizer.omega_max.value(),
    )?
    .with_dt(cfg.dt)?;
    let optim = cfg.optimizer.options();
    let outcome =
        optimize_with_restarts(&problem, cfg.optimizer.restarts, cfg.optimizer.seed, &optim)?;
    write_field(&out(opts, "field.csv"), &outcome.best.field)?;

    let mut summary =
        serde_json::to_value(selectivity_report(&problem, &outcome)).expect("report serializes");
    if let Some(bounds) = &block.omega_max_sweep {
        let runs = selectivity_sweep(
            &problem,
            bounds,
            cfg.optimizer.restarts,
            cfg.optimizer.seed,
            &optim,
        )?;
        let mut points = Vec::new();
        for run in &runs {
            let bounded = problem.clone().with_omega_max(Some(run.omega_max))?;
            write_json(
                &out(opts, &format!("sweep_omega_max_{}.json", run.omega_max)),
                &selectivity_report(&bounded, &run.outcome),
            )?;
            points.push((run.omega_max, run.outcome.best.cost));
        }
        write_sweep(&out(opts, "sweep.csv"), &points)?;
        summary["sweep_minimum"] = match plateau_onset(&points, SWEEP_TOLERANCE) {
            Some((b, c)) => json!({ "omega_max": b, "C": c, "tolerance": SWEEP_TOLERANCE }),
            None => serde_json::Value::Null,
        };
    }
    summary["command"] = json!("selectivity");
    summary["runtime_s"] = json!(start.elapsed().as_secs_f64());
    write_json(&summary_path(opts), &summary)?;
    Ok(Outcome::Success)
}

/// Single population target at `horizon`; writes `field.csv`,
/// `trajectory.csv` and `summary.json`. In strict mode an unreached target
/// yields [`Outcome::Unreached`].
pub fn cmd_optimize(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome> {
    let start = Instant::now();
    let (_, cfg) = prepare(cfg, opts)?;
    let target = cfg
        .optimizer
        .target_pop
        .ok_or_else(|| Error::Config("optimize needs optimizer.target_pop".into()))?;
    let horizon = cfg
        .horizon
        .ok_or_else(|| Error::Config("optimize needs a horizon".into()))?;
    let params = cfg.single_params()?;
    let s0 = cfg.initial_state()?;
    let mut problem =
        PopulationTargetProblem::new(params, s0, horizon, target, cfg.optimizer.omega_max.value())?
            .with_dt(cfg.dt)?;
    if let Some(lo) = cfg.optimizer.omega_min {
        problem = problem.with_omega_min(lo)?;
    }
    let outcome = optimize_with_restarts(
        &problem,
        cfg.optimizer.restarts,
        cfg.optimizer.seed,
        &cfg.optimizer.options(),
    )?;
    let best = &outcome.best;
    let traj = propagate(&params, &best.field, s0);
    write_field(&out(opts, "field.csv"), &best.field)?;
    write_trajectory(&out(opts, "trajectory.csv"), &traj, &best.field)?;
    let status = classify(best.cost, DEFAULT_NEAR_THRESHOLD);
    write_json(
        &summary_path(opts),
        &json!({
            "command": "optimize",
            "cost": best.cost,
            "final_pop": traj.final_state().population(),
            "target_pop": target,
            "status": status.as_str(),
            "reached": best.cost < REACHED_THRESHOLD,
            "iterations": best.iterations,
            "stop_reason": best.stop_reason,
            "best_seed": outcome.best_seed,
            "costs": outcome.costs,
            "max_abs_omega": best.field.max_abs(),
            "runtime_s": start.elapsed().as_secs_f64(),
        }),
    )?;
    if opts.strict && status != CellStatus::Reached {
        return Ok(Outcome::Unreached);
    }
    Ok(Outcome::Success)
}

/// Loads a config file and dispatches to a subcommand by name.
pub fn run_command(name: &str, config: &Path, opts: &RunOptions) -> Result<Outcome> {
    let cfg = RunConfig::load(config)?;
    match name {
        "simulate" => cmd_simulate(&cfg, opts),
        "reachable" => cmd_reachable(&cfg, opts),
        "selectivity" => cmd_selectivity(&cfg, opts),
        "optimize" => cmd_optimize(&cfg, opts),
        other => Err(Error::Config(format!("unknown command {other}"))),
    }
}
