//! Piecewise-constant detuning fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Detuning samples `ω_k`, each held on `[k·dt, (k+1)·dt)`.
///
/// A field with no samples is a zero-duration field; it propagates a state
/// to itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlField {
    dt: f64,
    samples: Vec<f64>,
}

impl ControlField {
    pub fn new(dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidField(format!("dt must be > 0, got {dt}")));
        }
        if let Some(k) = samples.iter().position(|w| !w.is_finite()) {
            return Err(Error::InvalidField(format!("sample {k} is not finite")));
        }
        Ok(Self { dt, samples })
    }

    pub fn constant(omega: f64, dt: f64, n_steps: usize) -> Result<Self> {
        Self::new(dt, vec![omega; n_steps])
    }

    /// Zero-duration field.
    pub fn empty(dt: f64) -> Result<Self> {
        Self::new(dt, Vec::new())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    /// Step boundaries `0, dt, …, len·dt`.
    pub fn boundaries(&self) -> Vec<f64> {
        (0..=self.samples.len())
            .map(|k| k as f64 * self.dt)
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// `|ω_k| <= bound` for every sample.
    pub fn respects(&self, bound: f64) -> bool {
        self.samples.iter().all(|w| w.abs() <= bound)
    }

    /// Clip every sample to `[-bound, bound]`.
    pub fn clip(&mut self, bound: f64) {
        self.clamp(-bound, bound);
    }

    /// `lo <= ω_k <= hi` for every sample.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.samples.iter().all(|w| (lo..=hi).contains(w))
    }

    pub fn clamp(&mut self, lo: f64, hi: f64) {
        for w in &mut self.samples {
            *w = w.clamp(lo, hi);
        }
    }

    /// Accumulated phase `W = Σ ω_k dt` over the first `steps` samples.
    pub fn phase_integral(&self, steps: usize) -> f64 {
        self.samples[..steps].iter().sum::<f64>() * self.dt
    }

    /// Index `m` such that `t = m·dt`, if `t` lies on the step grid.
    pub fn step_index(&self, t: f64) -> Result<usize> {
        let m = (t / self.dt).round();
        if t < 0.0 || (t - m * self.dt).abs() > 1e-9 * self.dt.max(t) || m as usize > self.len() {
            return Err(Error::OffGrid { t });
        }
        Ok(m as usize)
    }
}

/// Number of steps and adjusted step so that `n·dt` equals `horizon`
/// exactly, with the adjusted step never exceeding `dt_nominal`.
pub fn step_grid(horizon: f64, dt_nominal: f64) -> Result<(usize, f64)> {
    if !(dt_nominal.is_finite() && dt_nominal > 0.0) {
        return Err(Error::InvalidField(format!(
            "dt must be > 0, got {dt_nominal}"
        )));
    }
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::NegativeDuration(horizon));
    }
    if horizon == 0.0 {
        return Ok((0, dt_nominal));
    }
    let n = ((horizon / dt_nominal) - 1e-9).ceil().max(1.0) as usize;
    Ok((n, horizon / n as f64))
}
