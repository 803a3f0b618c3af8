//! Spectral density, correlation kernel and the weak-coupling decay law of a
//! Lorentzian bath.

use pseudomode_control::dynamics::{
    constant_propagator, correlation_kernel, spectral_density, weak_coupling_population,
    SystemParams,
};

fn main() -> pseudomode_control::Result<()> {
    for (name, params) in [
        ("strong", SystemParams::new(5f64.sqrt(), 1.0)?),
        ("weak", SystemParams::new(0.25, 1.0)?),
    ] {
        println!(
            "{name}: p = {:.4}, q = {}, gamma = {:.4}, oscillating free evolution: {}",
            params.p,
            params.q,
            params.gamma(),
            params.is_strong_coupling()
        );
        println!(
            "  J(w): {}",
            (0..5)
                .map(|k| format!("{:.4}", spectral_density(&params, k as f64)))
                .collect::<Vec<_>>()
                .join(" ")
        );
        println!(
            "  |K(tau)|: {}",
            (0..5)
                .map(|k| format!("{:.4}", correlation_kernel(&params, 0.5 * k as f64).norm()))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }

    let weak = SystemParams::new(0.25, 1.0)?;
    println!("\nweak coupling, exact vs exponential model");
    for w in [0.0, 2.0] {
        for t in [10.0, 40.0] {
            let exact = constant_propagator(&weak, w, t)?.u11.norm_sqr();
            println!(
                "  w = {w}, t = {t:>4}: {exact:.5} vs {:.5}",
                weak_coupling_population(&weak, w, t)
            );
        }
    }
    Ok(())
}
