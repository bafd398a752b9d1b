//! Experiment harness around `hirota-core`: JSON configs in, CSV and a run
//! manifest out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod fit;
pub mod io;
pub mod profile;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use hirota_core::ErrorClass;
use serde_json::json;

pub use config::ExperimentConfig;
pub use fit::DecayFit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Scatter,
    Soliton,
    Simulate,
    Asympt,
    Compare,
    Resolution,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scatter => "scatter",
            Command::Soliton => "soliton",
            Command::Simulate => "simulate",
            Command::Asympt => "asympt",
            Command::Compare => "compare",
            Command::Resolution => "resolution",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: PathBuf,
    pub deterministic: bool,
}

/// Worker count: 1 when deterministic, else `HIROTA_THREADS` if set, else rayon's default.
pub fn thread_count(deterministic: bool, env: Option<&str>) -> anyhow::Result<Option<usize>> {
    if deterministic {
        return Ok(Some(1));
    }
    match env {
        None => Ok(None),
        Some(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("HIROTA_THREADS must be a positive integer (got `{v}`)"))?;
            anyhow::ensure!(n > 0, "HIROTA_THREADS must be positive");
            Ok(Some(n))
        }
    }
}

pub fn execute(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<commands::Outcome> {
    match cmd {
        Command::Scatter => commands::cmd_scatter(cfg, out),
        Command::Soliton => commands::cmd_soliton(cfg, out),
        Command::Simulate => commands::cmd_simulate(cfg, out),
        Command::Asympt => commands::cmd_asympt(cfg, out),
        Command::Compare => commands::cmd_compare(cfg, out),
        Command::Resolution => commands::cmd_resolution(cfg, out),
    }
}

/// Loads the config, runs the command in a sized thread pool and writes `manifest.json`.
pub fn run(cmd: Command, opts: &RunOptions) -> anyhow::Result<commands::Outcome> {
    let cfg = ExperimentConfig::load(&opts.config)?;
    let threads = thread_count(opts.deterministic, std::env::var("HIROTA_THREADS").ok().as_deref())?;
    std::fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let start = Instant::now();
    let outcome = pool.install(|| execute(cmd, &cfg, &opts.out))?;
    let elapsed = start.elapsed().as_secs_f64();

    let files: Vec<String> = outcome
        .files
        .iter()
        .map(|f| {
            f.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
        .collect();
    let mut manifest = json!({
        "tool": "hirota",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": hirota_core::VERSION,
        "command": cmd.name(),
        "config": cfg,
        "seed": cfg.seed,
        "deterministic": opts.deterministic,
        "threads": pool.current_num_threads(),
        "outputs": files,
        "diagnostics": outcome.diagnostics,
        "warnings": outcome.warnings,
    });
    if !opts.deterministic {
        manifest["elapsed_seconds"] = json!(elapsed);
    }
    let path = opts.out.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(outcome)
}

/// Exit status for a failed run: 2 input, 3 accuracy, 4 model domain.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<hirota_core::Error>() {
            return match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Accuracy => 3,
                ErrorClass::ModelDomain => 4,
            };
        }
    }
    2
}
