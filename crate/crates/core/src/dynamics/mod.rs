//! Reduced qubit / effective-mode dynamics.
//!
//! The qubit amplitude `c1` and the effective-mode amplitude `y` obey the
//! linear system
//!
//! ```text
//! d/dt (c1, y) = [[-i ω(t), -p], [p, -q]] (c1, y)
//! ```
//!
//! in the frame rotating at the bath central frequency. Everything here is
//! expressed in that detuning frame; `omega_c` is carried for reporting only.

mod bath;
mod matrix;
mod multimode;
mod propagator;
mod reference;

pub use bath::{correlation_kernel, spectral_density, weak_coupling_population};
pub use matrix::{block_exp_derivative, CMatrix, Matrix2};
pub use multimode::{multimode_generator, propagate_multimode, MultiModeTrajectory};
pub use propagator::{
    accumulated_propagator, constant_propagator, det_of_propagator, propagate, propagate_final,
    step_derivative,
};
pub use reference::{rk4_reference, rk4_reference_multimode};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Bath and coupling constants of a single Lorentzian mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Effective coupling rate, `p = sqrt(γ q / 2)`.
    pub p: f64,
    /// Lorentzian half width at half maximum.
    pub q: f64,
    /// Central bath frequency. Not used by the dynamics.
    #[serde(default)]
    pub omega_c: f64,
}

impl SystemParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Self::with_center(p, q, 0.0)
    }

    pub fn with_center(p: f64, q: f64, omega_c: f64) -> Result<Self> {
        let params = Self { p, q, omega_c };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "p must be finite and >= 0, got {}",
                self.p
            )));
        }
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::InvalidParams(format!(
                "q must be finite and > 0, got {}",
                self.q
            )));
        }
        if !self.omega_c.is_finite() {
            return Err(Error::InvalidParams("omega_c must be finite".into()));
        }
        Ok(())
    }

    /// Effective coupling strength `γ = 2 p² / q`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.p * self.p / self.q
    }

    /// Parameters of a qubit whose coupling is scaled by `1 + alpha`.
    pub fn scaled_coupling(&self, alpha: f64) -> Self {
        Self {
            p: self.p * (1.0 + alpha),
            ..*self
        }
    }

    /// True when `2p > q`, i.e. the free evolution oscillates.
    pub fn is_strong_coupling(&self) -> bool {
        2.0 * self.p > self.q
    }
}

/// One Lorentzian component of a structured bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub p: f64,
    pub q: f64,
}

/// A bath made of a sum of Lorentzians sharing the same center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiModeParams {
    pub modes: Vec<Mode>,
    #[serde(default)]
    pub omega_c: f64,
}

impl MultiModeParams {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        let params = Self {
            modes,
            omega_c: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidParams("at least one mode is required".into()));
        }
        for (k, m) in self.modes.iter().enumerate() {
            if !(m.p.is_finite() && m.p >= 0.0) {
                return Err(Error::InvalidParams(format!(
                    "mode {k}: p must be >= 0, got {}",
                    m.p
                )));
            }
            if !(m.q.is_finite() && m.q > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "mode {k}: q must be > 0, got {}",
                    m.q
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

impl From<SystemParams> for MultiModeParams {
    fn from(p: SystemParams) -> Self {
        Self {
            modes: vec![Mode { p: p.p, q: p.q }],
            omega_c: p.omega_c,
        }
    }
}

/// Qubit amplitude `c1` and effective-mode amplitude `y`.
///
/// The ground-state amplitude `c0` is a constant of motion and is taken to
/// be zero, so it is not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub c1: C64,
    pub y: C64,
}

impl ReducedState {
    pub fn new(c1: C64, y: C64) -> Self {
        Self { c1, y }
    }

    /// Qubit excited, bath empty.
    pub fn excited() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Qubit in the ground state, one excitation in the effective mode.
    pub fn bath_excited() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn population(&self) -> f64 {
        self.c1.norm_sqr()
    }

    /// `|c1|² + |y|² <= 1`, the condition under which populations stay in [0, 1].
    pub fn is_physical(&self) -> bool {
        self.c1.norm_sqr() + self.y.norm_sqr() <= 1.0 + 1e-12
    }

    /// True if both amplitudes share a common real phase, which makes the
    /// constant-field population even in ω.
    pub fn is_real(&self) -> bool {
        self.c1.im == 0.0 && self.y.im == 0.0
    }

    pub fn as_array(&self) -> [C64; 2] {
        [self.c1, self.y]
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.y.is_finite()
    }
}

impl From<[C64; 2]> for ReducedState {
    fn from(v: [C64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

/// State of the qubit coupled to `N` effective modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiModeState {
    pub c1: C64,
    pub y: Vec<C64>,
}

impl MultiModeState {
    pub fn new(c1: C64, y: Vec<C64>) -> Self {
        Self { c1, y }
    }

    pub fn excited(n_modes: usize) -> Self {
        Self::new(C64::new(1.0, 0.0), vec![C64::new(0.0, 0.0); n_modes])
    }

    pub fn population(&self) -> f64 {
        self.c1.norm_sqr()
    }

    pub(crate) fn to_vec(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.y.len() + 1);
        v.push(self.c1);
        v.extend_from_slice(&self.y);
        v
    }

    pub(crate) fn from_slice(v: &[C64]) -> Self {
        Self::new(v[0], v[1..].to_vec())
    }
}

impl From<ReducedState> for MultiModeState {
    fn from(s: ReducedState) -> Self {
        Self::new(s.c1, vec![s.y])
    }
}

/// States sampled at the step boundaries of a control field.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ReducedState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.states.iter().map(ReducedState::population).collect()
    }

    pub fn final_state(&self) -> ReducedState {
        *self
            .states
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory always holds the initial time")
    }

    /// Trapezoidal time average of `|c1|²` over the whole trajectory.
    pub fn mean_population(&self) -> f64 {
        let pops = self.populations();
        let span = self.final_time() - self.times[0];
        if span <= 0.0 {
            return pops[0];
        }
        let area: f64 = self
            .times
            .windows(2)
            .zip(pops.windows(2))
            .map(|(t, p)| 0.5 * (t[1] - t[0]) * (p[0] + p[1]))
            .sum();
        area / span
    }
}
