use super::matrix::{block_exp_derivative, Matrix2};
use super::{ReducedState, SystemParams, Trajectory, C64};
use crate::error::{Error, Result};
use crate::field::ControlField;

/// Closed-form evolution operator for a constant detuning `omega` held for
/// a duration `t`.
///
/// With `Ω = sqrt((q - iω)² - 4p²)`:
///
/// ```text
/// U11 = e^{-(q+iω)t/2} [ch(Ωt/2) + (q-iω)/Ω sh(Ωt/2)]
/// U22 = e^{-(q+iω)t/2} [ch(Ωt/2) - (q-iω)/Ω sh(Ωt/2)]
/// U12 = -(2p/Ω) e^{-(q+iω)t/2} sh(Ωt/2),   U21 = -U12
/// ```
///
/// The entries are even in `Ω`, so the branch of the square root does not
/// matter.
pub fn constant_propagator(params: &SystemParams, omega: f64, t: f64) -> Result<Matrix2> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeDuration(t));
    }
    Ok(step_propagator(params, omega, t))
}

pub(crate) fn omega_root(params: &SystemParams, omega: f64) -> C64 {
    let a = C64::new(params.q, -omega);
    (a * a - 4.0 * params.p * params.p).sqrt()
}

#[inline]
pub(crate) fn step_propagator(params: &SystemParams, omega: f64, t: f64) -> Matrix2 {
    propagator_with_root(params, omega, t, omega_root(params, omega))
}

/// Evaluates the closed form for a caller-supplied root `Ω`.
pub(crate) fn propagator_with_root(
    params: &SystemParams,
    omega: f64,
    t: f64,
    root: C64,
) -> Matrix2 {
    let a = C64::new(-params.q, -omega) * (0.5 * t);
    let h = root * (0.5 * t);
    let e_plus = (a + h).exp();
    let e_minus = (a - h).exp();
    let cosh_e = (e_plus + e_minus) * 0.5;
    // e^a · sinh(h)/h, with a series where the difference form would cancel.
    let sinhc_e = if h.norm() >= 0.5 {
        (e_plus - e_minus) / (h * 2.0)
    } else {
        a.exp() * sinhc_series(h)
    };
    let detuned = C64::new(params.q, -omega) * (0.5 * t) * sinhc_e;
    let u12 = -sinhc_e * (params.p * t);
    Matrix2::new(cosh_e + detuned, u12, -u12, cosh_e - detuned)
}

fn sinhc_series(h: C64) -> C64 {
    let h2 = h * h;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..20 {
        term = term * h2 / ((2 * k) as f64 * (2 * k + 1) as f64);
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    sum
}

/// Step generator `M(ω) = [[-iω, -p], [p, -q]]`.
pub(crate) fn generator(params: &SystemParams, omega: f64) -> Matrix2 {
    Matrix2::new(
        C64::new(0.0, -omega),
        C64::new(-params.p, 0.0),
        C64::new(params.p, 0.0),
        C64::new(-params.q, 0.0),
    )
}

/// Step propagator and its derivative with respect to the step's detuning.
///
/// The derivative is the top-right block of `exp([[M, D], [0, M]]·dt)` with
/// `D = ∂M/∂ω = diag(-i, 0)`.
pub fn step_derivative(params: &SystemParams, omega: f64, dt: f64) -> (Matrix2, Matrix2) {
    let dts = C64::new(dt, 0.0);
    let d = Matrix2::new(
        C64::new(0.0, -1.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    );
    block_exp_derivative(generator(params, omega).scale(dts), d.scale(dts))
}

/// Propagates `s0` through every step of `field`, recording the state at
/// each step boundary.
pub fn propagate(params: &SystemParams, field: &ControlField, s0: ReducedState) -> Trajectory {
    let dt = field.dt();
    let mut times = Vec::with_capacity(field.len() + 1);
    let mut states = Vec::with_capacity(field.len() + 1);
    times.push(0.0);
    states.push(s0);
    let mut x = s0.as_array();
    for (k, &w) in field.samples().iter().enumerate() {
        x = step_propagator(params, w, dt).apply(x);
        times.push((k + 1) as f64 * dt);
        states.push(x.into());
    }
    Trajectory { times, states }
}

/// Final state only; no trajectory is stored.
pub fn propagate_final(
    params: &SystemParams,
    field: &ControlField,
    s0: ReducedState,
) -> ReducedState {
    let dt = field.dt();
    field
        .samples()
        .iter()
        .fold(s0.as_array(), |x, &w| {
            step_propagator(params, w, dt).apply(x)
        })
        .into()
}

/// Left product `U(ω_steps) ··· U(ω_1)` over the first `steps` samples.
pub fn accumulated_propagator(
    params: &SystemParams,
    field: &ControlField,
    steps: usize,
) -> Matrix2 {
    let dt = field.dt();
    field.samples()[..steps.min(field.len())]
        .iter()
        .fold(Matrix2::identity(), |acc, &w| {
            step_propagator(params, w, dt) * acc
        })
}

/// Analytic determinant of the accumulated propagator at time `t`:
/// `exp(-q t - i W(t))` with `W(t) = ∫ω`.
pub fn det_of_propagator(field: &ControlField, params: &SystemParams, t: f64) -> Result<C64> {
    let steps = field.step_index(t)?;
    let w = field.phase_integral(steps);
    Ok(C64::new(-params.q * t, -w).exp())
}
