//! Analytic control shapes: constant, magic-frequency sinusoid, square wave
//! and two-piece protocols, plus the closed-form figures of merit that go
//! with them.

mod bessel;

pub use bessel::{
    bessel_j, bessel_j0, bessel_j1, j0_zero_in, jacobi_anger_coefficients, jacobi_anger_sum,
    magic_ratio,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{SystemParams, C64};
use crate::error::{Error, Result};
use crate::field::{step_grid, ControlField};

/// Minimum number of steps per sinusoid period before `render` refines `dt`.
pub const STEPS_PER_PERIOD: f64 = 40.0;

/// Description of an analytic detuning profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    /// `ω(t) = ω_max`.
    Constant { omega_max: f64 },
    /// `ω(t) = ω_max sin(Θ t)`. Without `theta` the magic frequency
    /// `Θ = ω_max / j0,1` is used.
    Sinusoid {
        omega_max: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    /// `+ω_max` on the first half period, `-ω_max` on the second. Without
    /// `period`, `T = 4π/ω_max`.
    SquareWave {
        omega_max: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period: Option<f64>,
    },
    /// `omega_a` before `t_switch`, `omega_b` after.
    TwoPiece {
        omega_max: f64,
        t_switch: f64,
        omega_a: f64,
        omega_b: f64,
    },
}

impl ShapeSpec {
    pub fn omega_max(&self) -> f64 {
        match *self {
            ShapeSpec::Constant { omega_max }
            | ShapeSpec::Sinusoid { omega_max, .. }
            | ShapeSpec::SquareWave { omega_max, .. }
            | ShapeSpec::TwoPiece { omega_max, .. } => omega_max,
        }
    }

    /// The sinusoid's angular frequency, resolving the magic default.
    pub fn theta(&self) -> Option<f64> {
        match *self {
            ShapeSpec::Sinusoid { omega_max, theta } => {
                Some(theta.unwrap_or_else(|| omega_max / magic_ratio()))
            }
            _ => None,
        }
    }

    /// The square wave's period, resolving the `4π/ω_max` default.
    pub fn period(&self) -> Option<f64> {
        match *self {
            ShapeSpec::SquareWave { omega_max, period } => {
                Some(period.unwrap_or(4.0 * PI / omega_max))
            }
            _ => None,
        }
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        let omega_max = self.omega_max();
        if !(omega_max.is_finite() && omega_max >= 0.0) {
            return Err(Error::InvalidShape(format!(
                "omega_max must be >= 0, got {omega_max}"
            )));
        }
        match *self {
            ShapeSpec::Constant { .. } => {}
            ShapeSpec::Sinusoid { .. } => {
                let theta = self.theta().unwrap();
                if !(theta.is_finite() && theta > 0.0) {
                    return Err(Error::InvalidShape(format!(
                        "theta must be > 0, got {theta}"
                    )));
                }
            }
            ShapeSpec::SquareWave { .. } => {
                let period = self.period().unwrap();
                if !(period.is_finite() && period > 0.0) {
                    return Err(Error::InvalidShape(format!(
                        "period must be > 0, got {period}"
                    )));
                }
            }
            ShapeSpec::TwoPiece {
                omega_max,
                t_switch,
                omega_a,
                omega_b,
            } => {
                if !(0.0..=horizon).contains(&t_switch) {
                    return Err(Error::InvalidShape(format!(
                        "t_switch {t_switch} outside [0, {horizon}]"
                    )));
                }
                if omega_a.abs() > omega_max || omega_b.abs() > omega_max {
                    return Err(Error::InvalidShape("piece values exceed omega_max".into()));
                }
            }
        }
        Ok(())
    }
}

/// Samples `shape` at step midpoints over `[0, horizon]`.
///
/// The step is adjusted so that steps tile the horizon exactly. Sinusoids
/// are refined to at least [`STEPS_PER_PERIOD`] steps per period; square
/// waves use a step that divides the half period, so sign flips land on
/// step boundaries (the total duration is then within half a step of
/// `horizon`).
pub fn render(shape: &ShapeSpec, dt: f64, horizon: f64) -> Result<ControlField> {
    shape.validate(horizon)?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidField(format!("dt must be > 0, got {dt}")));
    }
    let omega_max = shape.omega_max();
    match *shape {
        ShapeSpec::Constant { .. } => {
            let (n, dt) = step_grid(horizon, dt)?;
            ControlField::constant(omega_max, dt, n)
        }
        ShapeSpec::Sinusoid { .. } => {
            let theta = shape.theta().unwrap();
            let limit = 2.0 * PI / theta / STEPS_PER_PERIOD;
            let dt = if dt > limit {
                log::warn!("sinusoid with theta = {theta} under-resolved at dt = {dt}; refining to {limit}");
                limit
            } else {
                dt
            };
            let (n, dt) = step_grid(horizon, dt)?;
            let samples = (0..n)
                .map(|k| omega_max * (theta * (k as f64 + 0.5) * dt).sin())
                .collect();
            ControlField::new(dt, samples)
        }
        ShapeSpec::SquareWave { .. } => {
            let half = 0.5 * shape.period().unwrap();
            let per_half = ((half / dt) - 1e-9).ceil().max(1.0) as usize;
            let dt = half / per_half as f64;
            let n = (horizon / dt).round() as usize;
            let samples = (0..n)
                .map(|k| {
                    if (k / per_half) % 2 == 0 {
                        omega_max
                    } else {
                        -omega_max
                    }
                })
                .collect();
            ControlField::new(dt, samples)
        }
        ShapeSpec::TwoPiece {
            t_switch,
            omega_a,
            omega_b,
            ..
        } => {
            let (n, dt) = step_grid(horizon, dt)?;
            let samples = (0..n)
                .map(|k| {
                    if (k as f64 + 0.5) * dt < t_switch {
                        omega_a
                    } else {
                        omega_b
                    }
                })
                .collect();
            ControlField::new(dt, samples)
        }
    }
}

/// Position of the first maximum of `|U12(0, t)|²`:
/// `t* = (2/Im Ω) arccos(q / sqrt(q² + (Im Ω)²))` at `ω = 0`.
pub fn switch_time_tstar(params: &SystemParams) -> Result<f64> {
    if !params.is_strong_coupling() {
        return Err(Error::NoOscillatoryMaximum {
            p: params.p,
            q: params.q,
        });
    }
    let q = params.q;
    let im = (4.0 * params.p * params.p - q * q).sqrt();
    Ok(2.0 / im * (q / (q * q + im * im).sqrt()).acos())
}

/// Large-amplitude approximation of `c1(T)` after one square-wave period:
/// `1 - 2 p²/|Ω|² e^{-qT/2} [cosh(qT/2) - cos(ω_max T/2)]`.
pub fn square_wave_population_approx(params: &SystemParams, omega_max: f64, period: f64) -> f64 {
    let a = C64::new(params.q, -omega_max);
    let root_sq = (a * a - 4.0 * params.p * params.p).norm();
    let half = 0.5 * period;
    let bracket = (params.q * half).cosh() - (omega_max * half).cos();
    1.0 - 2.0 * params.p * params.p / root_sq * (-params.q * half).exp() * bracket
}
