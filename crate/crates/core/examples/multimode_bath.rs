//! A bath made of two Lorentzians, against each component alone.

use pseudomode_control::dynamics::{
    propagate, propagate_multimode, Mode, MultiModeParams, MultiModeState, ReducedState,
    SystemParams,
};
use pseudomode_control::shapes::{render, ShapeSpec};

fn main() -> pseudomode_control::Result<()> {
    let field = render(
        &ShapeSpec::Sinusoid {
            omega_max: 12.0,
            theta: None,
        },
        0.01,
        4.0,
    )?;
    let narrow = Mode { p: 2.0, q: 1.0 };
    let broad = Mode { p: 1.5, q: 6.0 };
    let bath = MultiModeParams::new(vec![narrow, broad])?;
    let both = propagate_multimode(&bath, &field, &MultiModeState::excited(2))?;

    let alone: Vec<Vec<f64>> = [narrow, broad]
        .iter()
        .map(|m| {
            SystemParams::new(m.p, m.q)
                .map(|p| propagate(&p, &field, ReducedState::excited()).populations())
        })
        .collect::<Result<_, _>>()?;

    println!("{:>6} {:>10} {:>10} {:>10}", "t", "narrow", "broad", "both");
    let pops = both.populations();
    for k in (0..pops.len()).step_by(40) {
        println!(
            "{:>6.2} {:>10.6} {:>10.6} {:>10.6}",
            both.times[k], alone[0][k], alone[1][k], pops[k]
        );
    }
    let last = both.states.last().unwrap();
    let norm = last.c1.norm_sqr() + last.y.iter().map(|y| y.norm_sqr()).sum::<f64>();
    println!("final norm^2 {norm:.6}");
    Ok(())
}
