//! Reachable (time, population) targets for an excited qubit, printed as a
//! character map and written as CSV.
//!
//! `cargo run --release --example reachable_map -- [omega_max] [out_dir]`

use pseudomode_control::dynamics::{ReducedState, SystemParams};
use pseudomode_control::io::{write_boundaries, write_grid};
use pseudomode_control::reachable::{map_options, map_reachable, CellStatus, GridSpec};

fn main() -> pseudomode_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let omega_max: f64 = args.next().map_or(10.0, |a| a.parse().expect("omega_max"));
    let out = args.next();

    let params = SystemParams::new(5f64.sqrt(), 1.0)?;
    let grid = GridSpec::new(3.0, 40, 40, omega_max, ReducedState::excited())?;
    let map = map_reachable(&params, &grid, &map_options(), 7)?;

    println!("o constant field   # shaped field   + near   . unreached   (time ->, population ^)");
    for row in (0..grid.n_pop).rev() {
        let line: String = (0..grid.n_t)
            .map(|col| match map.cell(row, col).status {
                CellStatus::ConstantReachable => 'o',
                CellStatus::Reached => '#',
                CellStatus::Near => '+',
                CellStatus::Unreached => '.',
            })
            .collect();
        println!("{line}");
    }
    for s in [
        CellStatus::ConstantReachable,
        CellStatus::Reached,
        CellStatus::Near,
        CellStatus::Unreached,
    ] {
        println!("{:>18}: {}", s.as_str(), map.count(s));
    }

    if let Some(dir) = out {
        let dir = std::path::PathBuf::from(dir);
        std::fs::create_dir_all(&dir)?;
        write_grid(&dir.join("grid.csv"), &map)?;
        write_boundaries(&dir.join("boundary.csv"), &map.prescan)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
