use serde::{Deserialize, Serialize};

use super::gradient::population_gradient;
use crate::dynamics::{propagate_final, ReducedState, SystemParams};
use crate::error::{Error, Result};
use crate::field::{step_grid, ControlField};

/// Cost below which a population target counts as reached.
pub const REACHED_THRESHOLD: f64 = 0.01;

/// Default GRAPE step, in units of `1/q`.
pub const DEFAULT_DT: f64 = 0.02;

/// `| |c1(t_f)|² - target |`.
pub fn population_cost(final_state: &ReducedState, target_pop: f64) -> f64 {
    (final_state.population() - target_pop).abs()
}

/// `λ |c1⁽²⁾|² - |c1⁽¹⁾|²`; perfect selectivity gives -1.
pub fn selectivity_cost(pop1: f64, pop2: f64, lambda: f64) -> f64 {
    lambda * pop2 - pop1
}

/// Free population differences below this leave the gain undefined.
pub const GAIN_FLOOR: f64 = 1e-12;

/// Ratio of the optimized population difference to the free (`ω = 0`) one.
pub fn selectivity_gain(
    pop1_opt: f64,
    pop2_opt: f64,
    pop1_free: f64,
    pop2_free: f64,
) -> Result<f64> {
    let denom = (pop1_free - pop2_free).abs();
    if !(denom >= GAIN_FLOOR && denom.is_finite()) {
        return Err(Error::UndefinedGain);
    }
    Ok((pop1_opt - pop2_opt).abs() / denom)
}

/// A cost functional of a piecewise-constant detuning field on a fixed grid.
pub trait ControlProblem: Sync {
    /// Horizon of the problem.
    fn t_final(&self) -> f64;

    /// Nominal step; the actual step tiles `t_final` exactly.
    fn nominal_dt(&self) -> f64;

    /// Amplitude bound; `None` for unconstrained problems.
    fn omega_max(&self) -> Option<f64>;

    /// Admissible interval `[lo, hi]` for every sample; `[-ω_max, ω_max]`
    /// unless the problem narrows it.
    fn bounds(&self) -> Option<(f64, f64)> {
        self.omega_max().map(|b| (-b, b))
    }

    fn cost(&self, field: &ControlField) -> f64;

    /// Cost and its exact derivative with respect to every sample.
    fn cost_and_gradient(&self, field: &ControlField) -> (f64, Vec<f64>);

    /// Number of steps and actual step of the problem's grid.
    fn grid(&self) -> (usize, f64) {
        step_grid(self.t_final(), self.nominal_dt())
            .expect("problem horizon validated on construction")
    }

    fn zero_field(&self) -> ControlField {
        let (n, dt) = self.grid();
        ControlField::constant(0.0, dt, n).expect("valid grid")
    }
}

/// Exact gradient of the problem's cost.
pub fn gradient<P: ControlProblem + ?Sized>(problem: &P, field: &ControlField) -> Vec<f64> {
    problem.cost_and_gradient(field).1
}

fn check_horizon(t_final: f64, dt: f64, omega_max: Option<f64>) -> Result<()> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidParams(format!(
            "t_final must be > 0, got {t_final}"
        )));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
    }
    if let Some(b) = omega_max {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega_max must be >= 0, got {b}"
            )));
        }
    }
    Ok(())
}

/// Steer `|c1|²` to `target_pop` at `t_final`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationTargetProblem {
    pub params: SystemParams,
    pub s0: ReducedState,
    pub t_final: f64,
    pub target_pop: f64,
    pub omega_max: Option<f64>,
    /// Lower bound replacing `-ω_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_min: Option<f64>,
    pub dt: f64,
}

impl PopulationTargetProblem {
    pub fn new(
        params: SystemParams,
        s0: ReducedState,
        t_final: f64,
        target_pop: f64,
        omega_max: Option<f64>,
    ) -> Result<Self> {
        params.validate()?;
        check_horizon(t_final, DEFAULT_DT, omega_max)?;
        if !(0.0..=1.0).contains(&target_pop) {
            return Err(Error::InvalidParams(format!(
                "target_pop must be in [0, 1], got {target_pop}"
            )));
        }
        Ok(Self {
            params,
            s0,
            t_final,
            target_pop,
            omega_max,
            omega_min: None,
            dt: DEFAULT_DT,
        })
    }

    /// Restricts samples to `[omega_min, ω_max]`.
    pub fn with_omega_min(mut self, omega_min: f64) -> Result<Self> {
        match self.omega_max {
            Some(hi) if omega_min.is_finite() && (-hi..=hi).contains(&omega_min) => {
                self.omega_min = Some(omega_min);
                Ok(self)
            }
            Some(hi) => Err(Error::InvalidParams(format!(
                "omega_min must be in [-{hi}, {hi}], got {omega_min}"
            ))),
            None => Err(Error::InvalidParams("omega_min requires omega_max".into())),
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        check_horizon(self.t_final, dt, self.omega_max)?;
        self.dt = dt;
        Ok(self)
    }

    pub fn final_state(&self, field: &ControlField) -> ReducedState {
        propagate_final(&self.params, field, self.s0)
    }
}

impl ControlProblem for PopulationTargetProblem {
    fn t_final(&self) -> f64 {
        self.t_final
    }

    fn nominal_dt(&self) -> f64 {
        self.dt
    }

    fn omega_max(&self) -> Option<f64> {
        self.omega_max
    }

    fn bounds(&self) -> Option<(f64, f64)> {
        self.omega_max.map(|b| (self.omega_min.unwrap_or(-b), b))
    }

    fn cost(&self, field: &ControlField) -> f64 {
        population_cost(&self.final_state(field), self.target_pop)
    }

    fn cost_and_gradient(&self, field: &ControlField) -> (f64, Vec<f64>) {
        let g = population_gradient(&self.params, field, self.s0);
        let diff = g.final_state.population() - self.target_pop;
        // subgradient of |x|, zero at the kink
        let sign = if diff > 0.0 {
            1.0
        } else if diff < 0.0 {
            -1.0
        } else {
            0.0
        };
        let grad = g.d_population.iter().map(|d| sign * d).collect();
        (diff.abs(), grad)
    }
}

/// Two qubits with couplings `p` and `p(1 + α)`, sharing `q` and the field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectivityProblem {
    pub params1: SystemParams,
    pub params2: SystemParams,
    pub alpha: f64,
    pub lambda: f64,
    pub s0: ReducedState,
    pub t_final: f64,
    pub omega_max: Option<f64>,
    pub dt: f64,
}

impl SelectivityProblem {
    pub const DEFAULT_LAMBDA: f64 = 2.0;
    pub const DEFAULT_T_FINAL: f64 = 1.225;

    pub fn new(
        params1: SystemParams,
        alpha: f64,
        lambda: f64,
        s0: ReducedState,
        t_final: f64,
        omega_max: Option<f64>,
    ) -> Result<Self> {
        params1.validate()?;
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be > -1, got {alpha}"
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        check_horizon(t_final, DEFAULT_DT, omega_max)?;
        Ok(Self {
            params1,
            params2: params1.scaled_coupling(alpha),
            alpha,
            lambda,
            s0,
            t_final,
            omega_max,
            dt: DEFAULT_DT,
        })
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        check_horizon(self.t_final, dt, self.omega_max)?;
        self.dt = dt;
        Ok(self)
    }

    pub fn with_omega_max(mut self, omega_max: Option<f64>) -> Result<Self> {
        check_horizon(self.t_final, self.dt, omega_max)?;
        self.omega_max = omega_max;
        Ok(self)
    }

    /// Final populations of both qubits under `field`.
    pub fn populations(&self, field: &ControlField) -> (f64, f64) {
        (
            propagate_final(&self.params1, field, self.s0).population(),
            propagate_final(&self.params2, field, self.s0).population(),
        )
    }

    /// Gain of `field` relative to free evolution.
    pub fn gain(&self, field: &ControlField) -> Result<f64> {
        let (p1, p2) = self.populations(field);
        let (f1, f2) = self.populations(&self.zero_field());
        selectivity_gain(p1, p2, f1, f2)
    }
}

impl ControlProblem for SelectivityProblem {
    fn t_final(&self) -> f64 {
        self.t_final
    }

    fn nominal_dt(&self) -> f64 {
        self.dt
    }

    fn omega_max(&self) -> Option<f64> {
        self.omega_max
    }

    fn cost(&self, field: &ControlField) -> f64 {
        let (p1, p2) = self.populations(field);
        selectivity_cost(p1, p2, self.lambda)
    }

    fn cost_and_gradient(&self, field: &ControlField) -> (f64, Vec<f64>) {
        let g1 = population_gradient(&self.params1, field, self.s0);
        let g2 = population_gradient(&self.params2, field, self.s0);
        let cost = selectivity_cost(
            g1.final_state.population(),
            g2.final_state.population(),
            self.lambda,
        );
        let grad = g1
            .d_population
            .iter()
            .zip(&g2.d_population)
            .map(|(d1, d2)| self.lambda * d2 - d1)
            .collect();
        (cost, grad)
    }
}
