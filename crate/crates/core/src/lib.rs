//! Optimal control of a qubit whose transition frequency is modulated while
//! it exchanges excitation with a Lorentzian bath.
//!
//! The bath is summarized by an effective mode, so the qubit amplitude and
//! the mode amplitude evolve under a 2×2 linear system driven by the
//! detuning `ω(t)`. On top of exact propagation the crate provides analytic
//! control shapes, GRAPE-style gradient optimization for population targets
//! and two-qubit selectivity, and reachable-set maps.
//!
//! All quantities are expressed in units of the Lorentzian width `q`.

pub mod control;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod io;
pub mod reachable;
pub mod shapes;

pub use error::{Error, Result};
pub use field::ControlField;
