//! GRAPE-style optimization of piecewise-constant detuning fields.
//!
//! Gradients are exact: each step's propagator derivative comes from the
//! block exponential of the step generator, and a backward sweep assembles
//! `∂|c1(t_f)|²/∂ω_k`. Descent is projected onto the amplitude box.

mod descent;
mod ffactor;
mod gradient;
mod problem;
mod sweep;

pub use descent::{
    optimize, optimize_with_restarts, random_field, OptResult, OptimOptions, RestartOutcome,
    StopReason, UNBOUNDED_INIT_CAP,
};
pub use ffactor::{fit_f_factor, FFactorFit, FIT_FLOOR};
pub use gradient::{population_gradient, PopulationGradient};
pub use problem::{
    gradient, population_cost, selectivity_cost, selectivity_gain, ControlProblem,
    PopulationTargetProblem, SelectivityProblem, DEFAULT_DT, GAIN_FLOOR, REACHED_THRESHOLD,
};
pub use sweep::{plateau_onset, selectivity_sweep, SweepRun, SWEEP_TOLERANCE};
