//! Weak coupling: any bounded field acts as a rescaling `t -> f t` of the
//! constant-field exponential decay.

use pseudomode_control::control::fit_f_factor;
use pseudomode_control::dynamics::{
    propagate_final, weak_coupling_population, ReducedState, SystemParams,
};
use pseudomode_control::shapes::{render, ShapeSpec};

fn main() -> pseudomode_control::Result<()> {
    let omega_max = 6.36;
    let shape = ShapeSpec::Sinusoid {
        omega_max,
        theta: None,
    };
    let p1 = SystemParams::new(0.25, 1.0)?;
    let p2 = p1.scaled_coupling(0.5);

    let field = render(&shape, 0.02, 300.0)?;
    for params in [p1, SystemParams::new(0.125, 1.0)?] {
        let fit = fit_f_factor(&params, &field, omega_max, 300.0)?;
        println!(
            "p = {:<5}: f = {:.4} (window to t = {:.1}, rms residual {:.1e})",
            params.p, fit.f, fit.t_end, fit.residual
        );
    }

    let f = fit_f_factor(&p1, &field, omega_max, 300.0)?.f;
    let t_f = 5.0 * (1.0 + omega_max * omega_max) / (2.0 * p2.p * p2.p * f);
    let field = render(&shape, 0.02, t_f)?;
    let pop1 = propagate_final(&p1, &field, ReducedState::excited()).population();
    let pop2 = propagate_final(&p2, &field, ReducedState::excited()).population();
    println!(
        "t_f = {t_f:.1}: pop1 = {pop1:.4}, pop2 = {pop2:.4}, difference {:.4}",
        pop1 - pop2
    );

    let constant = render(&ShapeSpec::Constant { omega_max: 2.0 }, 0.05, 400.0)?;
    let weak = SystemParams::new(0.05, 1.0)?;
    let fit = fit_f_factor(&weak, &constant, 2.0, 400.0)?;
    println!(
        "constant field, p = 0.05: f = {:.4}; exp model at t = 400: {:.4}",
        fit.f,
        weak_coupling_population(&weak, 2.0, 400.0)
    );
    Ok(())
}
