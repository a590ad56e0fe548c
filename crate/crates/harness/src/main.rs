// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use vqoc_core::shotsim::Shots;
use vqoc_harness::{run_experiment, ExperimentConfig, Mode, Overrides};

#[derive(Parser)]
#[command(name = "vqoc", version, about = "Pulse-level VQOC and VQE ground-state experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment in the config's `mode`.
    Run(Common),
    /// Sweep VQOC over the config's `sweep_files`.
    Sweep(Common),
    /// Check the propagator bounds on seeded random pulses.
    Diagnose(Common),
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shots per evaluation, or `exact`.
    #[arg(long)]
    shots: Option<Shots>,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let (args, mode) = match cli.command {
        Command::Run(a) => (a, None),
        Command::Sweep(a) => (a, Some(Mode::Sweep)),
        Command::Diagnose(a) => (a, Some(Mode::Diagnostics)),
    };
    let mut config =
        ExperimentConfig::from_file(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    config.apply(&Overrides {
        seed: args.seed,
        shots: args.shots,
        output: args.out,
        mode,
    })?;
    let artifacts = run_experiment(&config)?;
    for csv in &artifacts.csv_files {
        println!("wrote {}", csv.display());
    }
    println!("wrote {}", artifacts.summary_json.display());
    Ok(())
}
