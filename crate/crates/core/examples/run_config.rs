//! Driving a workflow from a JSON document, as the `pmctl` binary does.
//!
//! `cargo run --release --example run_config -- configs/magic_square_wave.json out/square_wave`

use std::path::PathBuf;

use pseudomode_control::io::{cmd_simulate, RunConfig, RunOptions};

fn main() -> pseudomode_control::Result<()> {
    let mut args = std::env::args().skip(1);
    let cfg = match args.next() {
        Some(path) => RunConfig::load(path.as_ref())?,
        None => RunConfig::from_json(
            r#"{
                "schema": 1,
                "system": {"p": 2.2360679774997896, "q": 1.0},
                "shape": {"kind": "two_piece", "omega_max": 10.0, "t_switch": 0.6172581371221286, "omega_a": 0.0, "omega_b": 10.0},
                "initial": "case2",
                "horizon": 1.4,
                "dt": 0.001
            }"#,
        )?,
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/run_config".into()));
    cmd_simulate(
        &cfg,
        &RunOptions {
            out: out.clone(),
            seed: None,
            strict: false,
        },
    )?;
    println!("{}", std::fs::read_to_string(out.join("summary.json"))?);
    Ok(())
}
