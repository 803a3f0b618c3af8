//! Closed-form evolution under constant and two-piece detunings.
//!
//! Run with `cargo run --release --example constant_field`.

use pseudomode_control::dynamics::{
    constant_propagator, det_of_propagator, propagate, rk4_reference, ReducedState, SystemParams,
};
use pseudomode_control::shapes::{render, switch_time_tstar, ShapeSpec};

fn main() -> pseudomode_control::Result<()> {
    let params = SystemParams::new(5f64.sqrt(), 1.0)?;

    println!("|c1|^2 from c1(0) = 1 under constant detuning");
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "t", "w = 0", "w = 2", "w = 10"
    );
    for k in 0..=10 {
        let t = 0.3 * k as f64;
        let pops: Vec<f64> = [0.0, 2.0, 10.0]
            .iter()
            .map(|&w| constant_propagator(&params, w, t).map(|u| u.u11.norm_sqr()))
            .collect::<Result<_, _>>()?;
        println!(
            "{t:>6.2} {:>10.6} {:>10.6} {:>10.6}",
            pops[0], pops[1], pops[2]
        );
    }

    // Cross-check a piecewise field against RK4 and the determinant law.
    let field = render(
        &ShapeSpec::Sinusoid {
            omega_max: 8.0,
            theta: Some(3.0),
        },
        0.01,
        3.0,
    )?;
    let exact = propagate(&params, &field, ReducedState::excited());
    let rk4 = rk4_reference(&params, &field, ReducedState::excited(), 8)?;
    let err = (exact.final_state().c1 - rk4.final_state().c1).norm();
    println!(
        "\nsinusoid, final |c1|^2 = {:.8}, |exact - rk4| = {err:.2e}",
        exact.final_state().population()
    );
    let t = field.duration();
    let det = det_of_propagator(&field, &params, t)?;
    println!(
        "det U(0, {t}) = {:.6e} (expected modulus e^-qt = {:.6e})",
        det.norm(),
        (-params.q * t).exp()
    );

    // Bath excitation loaded into the qubit, then parked by a large detuning.
    let tstar = switch_time_tstar(&params)?;
    let shape = ShapeSpec::TwoPiece {
        omega_max: 10.0,
        t_switch: tstar,
        omega_a: 0.0,
        omega_b: 10.0,
    };
    let field = render(&shape, 0.001, 1.4)?;
    let traj = propagate(&params, &field, ReducedState::bath_excited());
    let peak = traj.populations().iter().cloned().fold(0.0, f64::max);
    println!(
        "\nt* = {tstar:.4}, peak |c1|^2 = {peak:.4}, |c1(1.4)|^2 = {:.4}",
        traj.final_state().population()
    );
    Ok(())
}
