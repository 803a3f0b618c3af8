use super::matrix::CMatrix;
use super::{MultiModeParams, MultiModeState, C64};
use crate::error::{Error, Result};
use crate::field::ControlField;

/// States of the multi-mode system at every step boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<MultiModeState>,
}

impl MultiModeTrajectory {
    pub fn populations(&self) -> Vec<f64> {
        self.states.iter().map(MultiModeState::population).collect()
    }
}

/// Generator of the `(N+1)`-dimensional system in the detuning frame:
/// `dc1/dt = -iω c1 - Σ p_k y_k`, `dy_k/dt = -q_k y_k + p_k c1`.
pub fn multimode_generator(params: &MultiModeParams, omega: f64) -> CMatrix {
    let n = params.len() + 1;
    let mut m = CMatrix::zeros(n);
    m[(0, 0)] = C64::new(0.0, -omega);
    for (k, mode) in params.modes.iter().enumerate() {
        m[(0, k + 1)] = C64::new(-mode.p, 0.0);
        m[(k + 1, 0)] = C64::new(mode.p, 0.0);
        m[(k + 1, k + 1)] = C64::new(-mode.q, 0.0);
    }
    m
}

/// Step-wise exact propagation of the multi-mode system.
pub fn propagate_multimode(
    params: &MultiModeParams,
    field: &ControlField,
    s0: &MultiModeState,
) -> Result<MultiModeTrajectory> {
    params.validate()?;
    if s0.y.len() != params.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            got: s0.y.len(),
        });
    }
    let dt = C64::new(field.dt(), 0.0);
    let mut times = vec![0.0];
    let mut states = vec![s0.clone()];
    let mut x = s0.to_vec();
    // consecutive equal samples reuse the previous step operator
    let mut cached: Option<(f64, CMatrix)> = None;
    for (k, &w) in field.samples().iter().enumerate() {
        let u = match &cached {
            Some((cw, u)) if *cw == w => u,
            _ => {
                cached = Some((w, multimode_generator(params, w).scale(dt).expm()));
                &cached.as_ref().unwrap().1
            }
        };
        x = u.matvec(&x);
        times.push((k + 1) as f64 * field.dt());
        states.push(MultiModeState::from_slice(&x));
    }
    Ok(MultiModeTrajectory { times, states })
}
