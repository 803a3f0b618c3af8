use serde::Serialize;

use crate::dynamics::{propagate, ReducedState, SystemParams};
use crate::error::{Error, Result};
use crate::field::ControlField;

/// Population at which the fit window closes.
pub const FIT_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FFactorFit {
    /// Time-rescaling factor `f` in `|c1(t)|² ≈ exp(-κ f t)`.
    pub f: f64,
    /// `κ = 2p² q / |q + i ω_max|²`.
    pub rate: f64,
    /// End of the fit window.
    pub t_end: f64,
    pub samples: usize,
    /// RMS residual of `ln |c1|²`.
    pub residual: f64,
}

/// Least-squares fit of `ln |c1(t)|² = -κ f t` on the trajectory of the
/// excited qubit under `field`, from `t = 0` until the population first
/// drops below [`FIT_FLOOR`] or `horizon` is reached.
pub fn fit_f_factor(
    params: &SystemParams,
    field: &ControlField,
    omega_max: f64,
    horizon: f64,
) -> Result<FFactorFit> {
    let q = params.q;
    let rate = 2.0 * params.p * params.p * q / (q * q + omega_max * omega_max);
    if rate <= 0.0 {
        return Err(Error::Fit("zero coupling: no decay to fit".into()));
    }
    let traj = propagate(params, field, ReducedState::excited());

    let mut points = Vec::new();
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        if t > horizon * (1.0 + 1e-12) {
            break;
        }
        let pop = s.population();
        if !(pop.is_finite() && pop > 0.0) {
            return Err(Error::Fit(format!("population vanished at t = {t}")));
        }
        if pop < FIT_FLOOR {
            break;
        }
        points.push((t, pop.ln()));
    }
    let fit_points = points.iter().filter(|(t, _)| *t > 0.0).count();
    if fit_points < 2 {
        return Err(Error::Fit(
            "fewer than two samples in the fit window".into(),
        ));
    }
    let stt: f64 = points.iter().map(|(t, _)| t * t).sum();
    let sty: f64 = points.iter().map(|(t, y)| t * y).sum();
    let slope = sty / stt;
    let f = -slope / rate;
    let residual = (points
        .iter()
        .map(|(t, y)| (y - slope * t).powi(2))
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Ok(FFactorFit {
        f,
        rate,
        t_end: points.last().unwrap().0,
        samples: points.len(),
        residual,
    })
}
