//! Configuration documents, file outputs and the subcommands built on them.

mod commands;
mod config;
mod output;

pub use commands::{
    cmd_optimize, cmd_reachable, cmd_selectivity, cmd_simulate, exit_code, run_command, Outcome,
    RunOptions,
};
pub use config::{
    Bound, GridBlock, InitialSpec, ModeAmplitudes, OptimizerBlock, RunConfig, SamplesSpec,
    SelectivityBlock, SystemSpec, Unbounded, Units, SCHEMA_VERSION,
};
pub use output::{
    write_boundaries, write_field, write_grid, write_json, write_multimode_trajectory, write_sweep,
    write_trajectory,
};
