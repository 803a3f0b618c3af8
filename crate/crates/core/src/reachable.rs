//! Reachable-set maps on a `(t, |c1|²)` grid: a constant-field prescan
//! followed by one optimization per remaining cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::{
    optimize, random_field, ControlProblem, OptimOptions, PopulationTargetProblem,
    REACHED_THRESHOLD,
};
use crate::dynamics::{constant_propagator, ReducedState, SystemParams};
use crate::error::{Error, Result};
use crate::field::{step_grid, ControlField};

pub const DEFAULT_N_OMEGA: usize = 101;
pub const DEFAULT_NEAR_THRESHOLD: f64 = 0.05;

/// Early-exit cost for per-cell optimizations; well inside the reached
/// threshold.
pub const MAP_STOP_BELOW: f64 = 1e-3;

/// Default per-cell optimizer settings: the standard budget with early exit
/// at [`MAP_STOP_BELOW`].
pub fn map_options() -> OptimOptions {
    OptimOptions {
        stop_below: Some(MAP_STOP_BELOW),
        ..Default::default()
    }
}

/// Bisection steps used to pin a constant field inside a bracketing pair.
const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_max: f64,
    /// Columns, in time.
    pub n_t: usize,
    /// Rows, in target population.
    pub n_pop: usize,
    pub omega_max: f64,
    pub init: ReducedState,
    pub dt: f64,
    pub n_omega: usize,
    pub near_threshold: f64,
    /// Optimizer restarts per cell.
    pub restarts: usize,
    /// Keep the best field of every cell.
    pub keep_fields: bool,
}

impl GridSpec {
    pub fn new(
        t_max: f64,
        n_t: usize,
        n_pop: usize,
        omega_max: f64,
        init: ReducedState,
    ) -> Result<Self> {
        let grid = Self {
            t_max,
            n_t,
            n_pop,
            omega_max,
            init,
            dt: crate::control::DEFAULT_DT,
            n_omega: DEFAULT_N_OMEGA,
            near_threshold: DEFAULT_NEAR_THRESHOLD,
            restarts: 1,
            keep_fields: false,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidParams(format!(
                "t_max must be > 0, got {}",
                self.t_max
            )));
        }
        if self.n_t == 0 || self.n_pop == 0 {
            return Err(Error::InvalidParams(
                "grid needs at least one row and one column".into(),
            ));
        }
        if !(self.omega_max.is_finite() && self.omega_max >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega_max must be >= 0, got {}",
                self.omega_max
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParams(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if self.n_omega < 2 {
            return Err(Error::InvalidParams("n_omega must be >= 2".into()));
        }
        if !(self.near_threshold >= REACHED_THRESHOLD) {
            return Err(Error::InvalidParams(format!(
                "near_threshold must be >= {REACHED_THRESHOLD}, got {}",
                self.near_threshold
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParams("restarts must be >= 1".into()));
        }
        if !(self.init.is_finite() && self.init.is_physical()) {
            return Err(Error::InvalidParams("initial state is not physical".into()));
        }
        Ok(())
    }

    pub fn n_cells(&self) -> usize {
        self.n_t * self.n_pop
    }

    /// Center time of column `col`.
    pub fn cell_time(&self, col: usize) -> f64 {
        (col as f64 + 0.5) * self.t_max / self.n_t as f64
    }

    /// Center population of row `row`.
    pub fn cell_pop(&self, row: usize) -> f64 {
        (row as f64 + 0.5) / self.n_pop as f64
    }

    /// Row-major index.
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.n_t + col
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    ConstantReachable,
    Reached,
    Near,
    Unreached,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::ConstantReachable => "constant_reachable",
            CellStatus::Reached => "reached",
            CellStatus::Near => "near",
            CellStatus::Unreached => "unreached",
        }
    }

    /// Constant-reachable or reached.
    pub fn is_reachable(self) -> bool {
        matches!(self, CellStatus::ConstantReachable | CellStatus::Reached)
    }
}

/// `reached` below 0.01, `near` below `near`, otherwise `unreached`.
pub fn classify(cost: f64, near: f64) -> CellStatus {
    if cost < REACHED_THRESHOLD {
        CellStatus::Reached
    } else if cost < near {
        CellStatus::Near
    } else {
        CellStatus::Unreached
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub row: usize,
    pub col: usize,
    pub t_q: f64,
    pub pop_target: f64,
    pub status: CellStatus,
    pub final_cost: f64,
    #[serde(skip)]
    pub field: Option<ControlField>,
}

/// Best constant field found for a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantHit {
    pub omega: f64,
    pub cost: f64,
}

/// Population along a constant-field trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub omega: f64,
    pub times: Vec<f64>,
    pub pops: Vec<f64>,
}

impl BoundaryCurve {
    /// Linear interpolation of the population at `t`.
    pub fn pop_at(&self, t: f64) -> f64 {
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            return self.pops[0];
        }
        if k >= self.times.len() {
            return *self.pops.last().unwrap();
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        self.pops[k - 1] * (1.0 - w) + self.pops[k] * w
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prescan {
    /// Only `ω >= 0` was swept, relying on `|c1|²(-ω) = |c1|²(ω)` for a
    /// real initial state.
    pub symmetric: bool,
    pub omegas: Vec<f64>,
    /// Row-major, `Some` for constant-reachable cells.
    pub hits: Vec<Option<ConstantHit>>,
    /// `ω = 0` and `ω = ω_max` trajectories.
    pub curves: Vec<BoundaryCurve>,
}

impl Prescan {
    pub fn is_constant_reachable(&self, index: usize) -> bool {
        self.hits[index].is_some()
    }
}

fn constant_pop(params: &SystemParams, s0: ReducedState, omega: f64, t: f64) -> Result<f64> {
    let u = constant_propagator(params, omega, t)?;
    Ok(ReducedState::from(u.apply(s0.as_array())).population())
}

fn boundary_curve(params: &SystemParams, grid: &GridSpec, omega: f64) -> Result<BoundaryCurve> {
    let (n, dt) = step_grid(grid.t_max, grid.dt)?;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    let pops = times
        .iter()
        .map(|&t| constant_pop(params, grid.init, omega, t))
        .collect::<Result<_>>()?;
    Ok(BoundaryCurve { omega, times, pops })
}

/// Marks every cell some constant field in `[-ω_max, ω_max]` reaches with
/// cost below 0.01.
///
/// `n_omega` values are swept; when the sampled populations bracket a
/// target, the crossing is located by bisection, since the population is
/// continuous in `ω`.
pub fn prescan_constant(params: &SystemParams, grid: &GridSpec) -> Result<Prescan> {
    params.validate()?;
    grid.validate()?;
    let symmetric = grid.init.is_real();
    let lo = if symmetric { 0.0 } else { -grid.omega_max };
    let m = grid.n_omega;
    let omegas: Vec<f64> = (0..m)
        .map(|k| lo + (grid.omega_max - lo) * k as f64 / (m - 1) as f64)
        .collect();

    let columns: Vec<Vec<Option<ConstantHit>>> = (0..grid.n_t)
        .into_par_iter()
        .map(|col| {
            let t = grid.cell_time(col);
            let pops = omegas
                .iter()
                .map(|&w| constant_pop(params, grid.init, w, t))
                .collect::<Result<Vec<f64>>>()?;
            (0..grid.n_pop)
                .map(|row| best_constant(params, grid.init, t, grid.cell_pop(row), &omegas, &pops))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut hits = vec![None; grid.n_cells()];
    for (col, column) in columns.into_iter().enumerate() {
        for (row, hit) in column.into_iter().enumerate() {
            hits[grid.index(row, col)] = hit;
        }
    }
    let curves = vec![
        boundary_curve(params, grid, 0.0)?,
        boundary_curve(params, grid, grid.omega_max)?,
    ];
    Ok(Prescan {
        symmetric,
        omegas,
        hits,
        curves,
    })
}

fn best_constant(
    params: &SystemParams,
    s0: ReducedState,
    t: f64,
    target: f64,
    omegas: &[f64],
    pops: &[f64],
) -> Result<Option<ConstantHit>> {
    let mut best: Option<ConstantHit> = None;
    let mut consider = |omega: f64, pop: f64| {
        let cost = (pop - target).abs();
        if best.map_or(true, |b| cost < b.cost) {
            best = Some(ConstantHit { omega, cost });
        }
    };
    for (&w, &p) in omegas.iter().zip(pops) {
        consider(w, p);
    }
    for k in 0..omegas.len() - 1 {
        let (fa, fb) = (pops[k] - target, pops[k + 1] - target);
        if fa * fb < 0.0 {
            let (mut a, mut b, mut fa) = (omegas[k], omegas[k + 1], fa);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (a + b);
                let fm = constant_pop(params, s0, mid, t)? - target;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            let mid = 0.5 * (a + b);
            consider(mid, constant_pop(params, s0, mid, t)?);
        }
    }
    Ok(best.filter(|b| b.cost < REACHED_THRESHOLD))
}

/// Optimizes one cell with `grid.restarts` random starts seeded from `seed`.
pub fn solve_cell(
    params: &SystemParams,
    grid: &GridSpec,
    row: usize,
    col: usize,
    opts: &OptimOptions,
    seed: u64,
) -> Result<CellResult> {
    let t = grid.cell_time(col);
    let target = grid.cell_pop(row);
    solve_target(params, grid, t, target, opts, seed).map(|(cost, field)| CellResult {
        row,
        col,
        t_q: t,
        pop_target: target,
        status: classify(cost, grid.near_threshold),
        final_cost: cost,
        field: if grid.keep_fields { field } else { None },
    })
}

/// Best cost and field for reaching `target` at `t`. A zero-duration target
/// is judged on the initial state with an empty field.
pub fn solve_target(
    params: &SystemParams,
    grid: &GridSpec,
    t: f64,
    target: f64,
    opts: &OptimOptions,
    seed: u64,
) -> Result<(f64, Option<ControlField>)> {
    if t == 0.0 {
        let cost = (grid.init.population() - target).abs();
        return Ok((cost, Some(ControlField::empty(grid.dt)?)));
    }
    let problem =
        PopulationTargetProblem::new(*params, grid.init, t, target, Some(grid.omega_max))?
            .with_dt(grid.dt)?;
    let mut best: Option<(f64, ControlField)> = None;
    for r in 0..grid.restarts as u64 {
        let run = optimize(
            &problem,
            &random_field(&problem, seed.wrapping_add(r)),
            opts,
        )?;
        if best.as_ref().map_or(true, |(c, _)| run.cost < *c) {
            best = Some((run.cost, run.field));
        }
        if best
            .as_ref()
            .is_some_and(|(c, _)| opts.stop_below.is_some_and(|s| *c <= s))
        {
            break;
        }
    }
    let (cost, field) = best.expect("restarts >= 1");
    debug_assert_eq!(field.len(), problem.grid().0);
    Ok((cost, Some(field)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ReachableMap {
    pub grid: GridSpec,
    pub prescan: Prescan,
    /// Row-major, one entry per cell.
    pub cells: Vec<CellResult>,
}

impl ReachableMap {
    pub fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn cell(&self, row: usize, col: usize) -> &CellResult {
        &self.cells[self.grid.index(row, col)]
    }
}

/// Prescans the grid, then optimizes every cell no constant field reaches.
///
/// Cell `k` uses seeds `seed + k·restarts, …`, so the map does not depend on
/// scheduling. An optimizer failure marks its cell unreached with infinite
/// cost.
pub fn map_reachable(
    params: &SystemParams,
    grid: &GridSpec,
    opts: &OptimOptions,
    seed: u64,
) -> Result<ReachableMap> {
    let prescan = prescan_constant(params, grid)?;
    let cells = (0..grid.n_cells())
        .into_par_iter()
        .map(|index| {
            let (row, col) = (index / grid.n_t, index % grid.n_t);
            let t_q = grid.cell_time(col);
            let pop_target = grid.cell_pop(row);
            if let Some(hit) = prescan.hits[index] {
                let field = if grid.keep_fields {
                    step_grid(t_q, grid.dt)
                        .and_then(|(n, dt)| ControlField::constant(hit.omega, dt, n))
                        .ok()
                } else {
                    None
                };
                return CellResult {
                    row,
                    col,
                    t_q,
                    pop_target,
                    status: CellStatus::ConstantReachable,
                    final_cost: hit.cost,
                    field,
                };
            }
            let cell_seed = seed.wrapping_add(index as u64 * grid.restarts as u64);
            solve_cell(params, grid, row, col, opts, cell_seed).unwrap_or_else(|e| {
                log::warn!("cell ({row}, {col}) failed: {e}");
                CellResult {
                    row,
                    col,
                    t_q,
                    pop_target,
                    status: CellStatus::Unreached,
                    final_cost: f64::INFINITY,
                    field: None,
                }
            })
        })
        .collect();
    Ok(ReachableMap {
        grid: grid.clone(),
        prescan,
        cells,
    })
}
