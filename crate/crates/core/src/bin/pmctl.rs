use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pseudomode_control::io::{exit_code, run_command, RunOptions};

#[derive(Parser)]
#[command(
    name = "pmctl",
    version,
    about = "Qubit-in-Lorentzian-bath control workflows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a shaped or sampled field and write the trajectory.
    Simulate(Common),
    /// Map reachable (time, population) targets.
    Reachable(Common),
    /// Optimize a field discriminating two couplings.
    Selectivity(Common),
    /// Optimize a field for a single population target.
    Optimize(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; RAYON_NUM_THREADS applies when absent.
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with code 4 when the optimization target is not reached.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, common) = match cli.command {
        Command::Simulate(c) => ("simulate", c),
        Command::Reachable(c) => ("reachable", c),
        Command::Selectivity(c) => ("selectivity", c),
        Command::Optimize(c) => ("optimize", c),
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let opts = RunOptions {
        out: common.out,
        seed: common.seed,
        strict: common.strict,
    };
    match run_command(name, &common.config, &opts) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
