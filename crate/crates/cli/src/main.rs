use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hirota_harness::{exit_code, run, Command, RunOptions};

#[derive(Parser)]
#[command(
    name = "hirota",
    version,
    about = "Inverse scattering experiments for the Hirota equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Single worker thread and a manifest without timings.
    #[arg(long)]
    deterministic: bool,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Sub {
    /// Reflection coefficient and discrete spectrum of the initial profile.
    Scatter(Common),
    /// Reflectionless N-soliton field.
    Soliton(Common),
    /// Pseudo-spectral evolution.
    Simulate(Common),
    /// Leading-order long-time asymptotics at given points.
    Asympt(Common),
    /// Simulation against asymptotics along rays, with decay fits.
    Compare(Common),
    /// Full N-soliton against cone-filtered models.
    Resolution(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.command {
        Sub::Scatter(c) => (Command::Scatter, c),
        Sub::Soliton(c) => (Command::Soliton, c),
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::Asympt(c) => (Command::Asympt, c),
        Sub::Compare(c) => (Command::Compare, c),
        Sub::Resolution(c) => (Command::Resolution, c),
    };
    let opts = RunOptions {
        config: common.config,
        out: common.out,
        deterministic: common.deterministic,
    };
    match run(cmd, &opts) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for f in &outcome.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
