//! Fixed-step RK4 integration of the reduced equations, used as an
//! independent check on the exact propagators.

use super::multimode::{multimode_generator, MultiModeTrajectory};
use super::{MultiModeParams, MultiModeState, ReducedState, SystemParams, Trajectory, C64};
use crate::error::{Error, Result};
use crate::field::ControlField;

/// Classical RK4 with `substeps` sub-intervals per field step; the field is
/// held constant on each step. Samples are recorded at step boundaries.
pub fn rk4_reference(
    params: &SystemParams,
    field: &ControlField,
    s0: ReducedState,
    substeps: usize,
) -> Result<Trajectory> {
    let multi = MultiModeParams::from(*params);
    let traj = rk4_reference_multimode(&multi, field, &s0.into(), substeps)?;
    Ok(Trajectory {
        times: traj.times,
        states: traj
            .states
            .iter()
            .map(|s| ReducedState::new(s.c1, s.y[0]))
            .collect(),
    })
}

pub fn rk4_reference_multimode(
    params: &MultiModeParams,
    field: &ControlField,
    s0: &MultiModeState,
    substeps: usize,
) -> Result<MultiModeTrajectory> {
    if substeps == 0 {
        return Err(Error::InvalidField("substeps must be >= 1".into()));
    }
    if s0.y.len() != params.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            got: s0.y.len(),
        });
    }
    let n = params.len() + 1;
    let h = field.dt() / substeps as f64;
    let mut x = s0.to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    let mut times = vec![0.0];
    let mut states = vec![s0.clone()];

    for (step, &w) in field.samples().iter().enumerate() {
        let m = multimode_generator(params, w);
        let apply = |v: &[C64], out: &mut [C64]| {
            for (i, o) in out.iter_mut().enumerate() {
                *o = (0..n).map(|j| m[(i, j)] * v[j]).sum();
            }
        };
        for _ in 0..substeps {
            apply(&x, &mut k1);
            for i in 0..n {
                tmp[i] = x[i] + k1[i] * (0.5 * h);
            }
            apply(&tmp, &mut k2);
            for i in 0..n {
                tmp[i] = x[i] + k2[i] * (0.5 * h);
            }
            apply(&tmp, &mut k3);
            for i in 0..n {
                tmp[i] = x[i] + k3[i] * h;
            }
            apply(&tmp, &mut k4);
            for i in 0..n {
                x[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
        }
        times.push((step + 1) as f64 * field.dt());
        states.push(MultiModeState::from_slice(&x));
    }
    Ok(MultiModeTrajectory { times, states })
}
