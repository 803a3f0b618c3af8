//! Constant, magic square-wave and magic sinusoid detunings of the same
//! amplitude, compared by their mean population over `qt ∈ [0, 3]`.

use std::f64::consts::PI;

use pseudomode_control::dynamics::{propagate, ReducedState, SystemParams};
use pseudomode_control::shapes::{
    bessel_j0, jacobi_anger_coefficients, magic_ratio, render, square_wave_population_approx,
    ShapeSpec,
};

fn main() -> pseudomode_control::Result<()> {
    let params = SystemParams::new(5f64.sqrt(), 1.0)?;
    let theta = 20.0;
    let ratio = magic_ratio();
    let omega_max = ratio * theta;
    println!(
        "first zero of J0: {ratio:.12} (J0 there = {:.1e})",
        bessel_j0(ratio)
    );

    let coeffs = jacobi_anger_coefficients(ratio, 6);
    let mags: Vec<String> = coeffs.iter().map(|c| format!("{:.4}", c.norm())).collect();
    println!(
        "Jacobi-Anger |coefficients| at the magic ratio: {}",
        mags.join(" ")
    );

    let shapes = [
        ("constant", ShapeSpec::Constant { omega_max }),
        (
            "square wave",
            ShapeSpec::SquareWave {
                omega_max,
                period: None,
            },
        ),
        (
            "sinusoid",
            ShapeSpec::Sinusoid {
                omega_max,
                theta: Some(theta),
            },
        ),
    ];
    for (name, shape) in &shapes {
        let field = render(shape, 0.002, 3.0)?;
        let traj = propagate(&params, &field, ReducedState::excited());
        println!(
            "{name:>12}: mean |c1|^2 = {:.5}, final = {:.5}",
            traj.mean_population(),
            traj.final_state().population()
        );
    }

    let magic = square_wave_population_approx(&params, omega_max, 4.0 * PI / omega_max);
    let worst = square_wave_population_approx(&params, omega_max, 2.0 * PI / omega_max);
    println!("c1 after one square-wave period: magic {magic:.6}, half-magic {worst:.6}");
    Ok(())
}
