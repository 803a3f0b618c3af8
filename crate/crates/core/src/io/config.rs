//! Run configuration: a versioned JSON document.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::control::{OptimOptions, DEFAULT_DT};
use crate::dynamics::{Mode, MultiModeParams, MultiModeState, ReducedState, SystemParams, C64};
use crate::error::{Error, Result};
use crate::field::ControlField;
use crate::reachable::{GridSpec, DEFAULT_NEAR_THRESHOLD, DEFAULT_N_OMEGA};
use crate::shapes::ShapeSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default)]
    pub units: Units,
    pub system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SamplesSpec>,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub optimizer: OptimizerBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selectivity: Option<SelectivityBlock>,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

/// Value of `q` in the units of the document. Frequencies are divided by
/// it and times multiplied by it before any computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub q: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { q: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    MultiMode(MultiModeParams),
    Single(SystemParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesSpec {
    pub dt: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialSpec {
    /// `c1 = 1, y = 0`.
    #[default]
    Case1,
    /// `c1 = 0, y = 1` (first mode for a multi-mode bath).
    Case2,
    Custom {
        c1: [f64; 2],
        y: ModeAmplitudes,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModeAmplitudes {
    One([f64; 2]),
    Many(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unbounded {
    Unbounded,
}

/// A finite amplitude bound or the keyword `"unbounded"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Value(f64),
    Keyword(Unbounded),
}

impl Bound {
    pub fn value(self) -> Option<f64> {
        match self {
            Bound::Value(b) => Some(b),
            Bound::Keyword(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerBlock {
    pub max_iters: usize,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub omega_max: Bound,
    /// Lower amplitude bound replacing `-omega_max` (`optimize` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_below: Option<f64>,
    /// Population to reach at `horizon` (`optimize` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_pop: Option<f64>,
}

impl Default for OptimizerBlock {
    fn default() -> Self {
        let o = OptimOptions::default();
        Self {
            max_iters: o.max_iters,
            tol: o.tol,
            restarts: 1,
            seed: 0,
            omega_max: Bound::Keyword(Unbounded::Unbounded),
            omega_min: None,
            stop_below: None,
            target_pop: None,
        }
    }
}

impl OptimizerBlock {
    pub fn options(&self) -> OptimOptions {
        OptimOptions {
            max_iters: self.max_iters,
            tol: self.tol,
            stop_below: self.stop_below,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub t_max: f64,
    pub n_t: usize,
    pub n_pop: usize,
    /// Step for the per-cell optimizations; the document's `dt` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_n_omega")]
    pub n_omega: usize,
    #[serde(default = "default_near")]
    pub near_threshold: f64,
}

fn default_n_omega() -> usize {
    DEFAULT_N_OMEGA
}

fn default_near() -> f64 {
    DEFAULT_NEAR_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectivityBlock {
    pub alpha: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_t_f")]
    pub t_f: f64,
    /// Extra runs, one per bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max_sweep: Option<Vec<f64>>,
}

fn default_lambda() -> f64 {
    crate::control::SelectivityProblem::DEFAULT_LAMBDA
}

fn default_t_f() -> f64 {
    crate::control::SelectivityProblem::DEFAULT_T_FINAL
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        if !(self.units.q.is_finite() && self.units.q > 0.0) {
            return Err(Error::Config(format!(
                "units.q must be > 0, got {}",
                self.units.q
            )));
        }
        match &self.system {
            SystemSpec::Single(p) => p.validate()?,
            SystemSpec::MultiMode(m) => m.validate()?,
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if let Some(h) = self.horizon {
            if !(h.is_finite() && h >= 0.0) {
                return Err(Error::Config(format!("horizon must be >= 0, got {h}")));
            }
        }
        if self.shape.is_some() && self.samples.is_some() {
            return Err(Error::Config(
                "give either shape or samples, not both".into(),
            ));
        }
        if let Some(s) = &self.samples {
            ControlField::new(s.dt, s.values.clone())?;
        }
        if let Bound::Value(b) = self.optimizer.omega_max {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::Config(format!(
                    "optimizer.omega_max must be >= 0, got {b}"
                )));
            }
        }
        if self.optimizer.restarts == 0 {
            return Err(Error::Config("optimizer.restarts must be >= 1".into()));
        }
        if let Some(t) = self.optimizer.target_pop {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Config(format!(
                    "optimizer.target_pop must be in [0, 1], got {t}"
                )));
            }
        }
        self.initial_multimode()?;
        Ok(())
    }

    /// Number of bath modes.
    pub fn n_modes(&self) -> usize {
        match &self.system {
            SystemSpec::Single(_) => 1,
            SystemSpec::MultiMode(m) => m.len(),
        }
    }

    /// Config with every frequency divided and every time multiplied by
    /// `units.q`; `units.q` becomes 1.
    pub fn normalized(&self) -> RunConfig {
        let k = self.units.q;
        let f = |w: f64| w / k;
        let t = |s: f64| s * k;
        let mut c = self.clone();
        c.units = Units::default();
        c.system = match &self.system {
            SystemSpec::Single(p) => SystemSpec::Single(SystemParams {
                p: f(p.p),
                q: f(p.q),
                omega_c: f(p.omega_c),
            }),
            SystemSpec::MultiMode(m) => SystemSpec::MultiMode(MultiModeParams {
                modes: m
                    .modes
                    .iter()
                    .map(|md| Mode {
                        p: f(md.p),
                        q: f(md.q),
                    })
                    .collect(),
                omega_c: f(m.omega_c),
            }),
        };
        c.shape = self.shape.as_ref().map(|s| match *s {
            ShapeSpec::Constant { omega_max } => ShapeSpec::Constant {
                omega_max: f(omega_max),
            },
            ShapeSpec::Sinusoid { omega_max, theta } => ShapeSpec::Sinusoid {
                omega_max: f(omega_max),
                theta: theta.map(f),
            },
            ShapeSpec::SquareWave { omega_max, period } => ShapeSpec::SquareWave {
                omega_max: f(omega_max),
                period: period.map(t),
            },
            ShapeSpec::TwoPiece {
                omega_max,
                t_switch,
                omega_a,
                omega_b,
            } => ShapeSpec::TwoPiece {
                omega_max: f(omega_max),
                t_switch: t(t_switch),
                omega_a: f(omega_a),
                omega_b: f(omega_b),
            },
        });
        c.samples = self.samples.as_ref().map(|s| SamplesSpec {
            dt: t(s.dt),
            values: s.values.iter().map(|&w| f(w)).collect(),
        });
        c.horizon = self.horizon.map(t);
        c.dt = t(self.dt);
        if let Bound::Value(b) = self.optimizer.omega_max {
            c.optimizer.omega_max = Bound::Value(f(b));
        }
        c.optimizer.omega_min = self.optimizer.omega_min.map(f);
        c.grid = self.grid.as_ref().map(|g| GridBlock {
            t_max: t(g.t_max),
            dt: g.dt.map(t),
            ..g.clone()
        });
        c.selectivity = self.selectivity.as_ref().map(|s| SelectivityBlock {
            t_f: t(s.t_f),
            omega_max_sweep: s
                .omega_max_sweep
                .as_ref()
                .map(|v| v.iter().map(|&w| f(w)).collect()),
            ..s.clone()
        });
        c
    }

    pub fn single_params(&self) -> Result<SystemParams> {
        match &self.system {
            SystemSpec::Single(p) => Ok(*p),
            SystemSpec::MultiMode(m) if m.len() == 1 => {
                SystemParams::with_center(m.modes[0].p, m.modes[0].q, m.omega_c)
            }
            SystemSpec::MultiMode(_) => Err(Error::Config(
                "this command needs a single-mode system".into(),
            )),
        }
    }

    pub fn multimode_params(&self) -> MultiModeParams {
        match &self.system {
            SystemSpec::Single(p) => (*p).into(),
            SystemSpec::MultiMode(m) => m.clone(),
        }
    }

    pub fn initial_multimode(&self) -> Result<MultiModeState> {
        let n = self.n_modes();
        let c = |a: [f64; 2]| C64::new(a[0], a[1]);
        let state = match &self.initial {
            InitialSpec::Case1 => MultiModeState::excited(n),
            InitialSpec::Case2 => {
                let mut y = vec![C64::new(0.0, 0.0); n];
                y[0] = C64::new(1.0, 0.0);
                MultiModeState::new(C64::new(0.0, 0.0), y)
            }
            InitialSpec::Custom { c1, y } => {
                let y: Vec<C64> = match y {
                    ModeAmplitudes::One(a) => vec![c(*a)],
                    ModeAmplitudes::Many(v) => v.iter().map(|a| c(*a)).collect(),
                };
                if y.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: y.len(),
                    });
                }
                MultiModeState::new(c(*c1), y)
            }
        };
        let norm = state.c1.norm_sqr() + state.y.iter().map(|v| v.norm_sqr()).sum::<f64>();
        if !(norm.is_finite() && norm <= 1.0 + 1e-12) {
            return Err(Error::Config(format!("initial state has norm² {norm} > 1")));
        }
        Ok(state)
    }

    pub fn initial_state(&self) -> Result<ReducedState> {
        let s = self.initial_multimode()?;
        if s.y.len() != 1 {
            return Err(Error::Config(
                "this command needs a single-mode system".into(),
            ));
        }
        Ok(ReducedState::new(s.c1, s.y[0]))
    }

    /// Reachable-map grid from the `grid` and `optimizer` blocks.
    pub fn grid_spec(&self) -> Result<GridSpec> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| Error::Config("missing grid block".into()))?;
        let omega_max = self.optimizer.omega_max.value().ok_or_else(|| {
            Error::Config("reachable maps need a finite optimizer.omega_max".into())
        })?;
        let mut spec = GridSpec::new(g.t_max, g.n_t, g.n_pop, omega_max, self.initial_state()?)?;
        spec.dt = g.dt.unwrap_or(self.dt);
        spec.n_omega = g.n_omega;
        spec.near_threshold = g.near_threshold;
        spec.restarts = self.optimizer.restarts;
        spec.validate()?;
        Ok(spec)
    }
}
