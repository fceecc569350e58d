//! Command-line front end: loads a JSON run configuration, applies flag
//! overrides, and writes the CSV artifacts. Exits nonzero with a single
//! machine-readable error line on failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relaynet::cli::{parse_config, run, Command as RunCommand};

#[derive(Parser)]
#[command(name = "relaynet", version, about = "Relay-network rate, gap, outage, and ε-capacity computations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON configuration document.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (overrides the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides the configuration).
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count (overrides the configuration).
    #[arg(long)]
    samples: Option<u64>,
    /// Worker threads for the internal estimators (0 = automatic).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Achievable mixed-scheme rate for a fixed network.
    Rate(Common),
    /// Cut-set-versus-rate gap audit for a fixed network.
    Gap(Common),
    /// Outage probabilities over a composite channel model.
    Outage(Common),
    /// Two-sided ε-capacity bounds across SNR.
    Epscap(Common),
    /// Both curve tables (outage vs rate, ε-capacity vs SNR).
    Curves(Common),
}

impl Cmd {
    fn parts(&self) -> (RunCommand, &Common) {
        match self {
            Cmd::Rate(c) => (RunCommand::Rate, c),
            Cmd::Gap(c) => (RunCommand::Gap, c),
            Cmd::Outage(c) => (RunCommand::Outage, c),
            Cmd::Epscap(c) => (RunCommand::Epscap, c),
            Cmd::Curves(c) => (RunCommand::Curves, c),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (expected, common) = cli.command.parts();
    match execute(expected, common) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": message, "command": expected.name() })
            );
            ExitCode::FAILURE
        }
    }
}

fn execute(expected: RunCommand, common: &Common) -> Result<Vec<PathBuf>, String> {
    if let Some(t) = common.threads {
        if t > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| e.to_string())?;
        }
    }
    let document = std::fs::read_to_string(&common.config)
        .map_err(|e| format!("cannot read {}: {e}", common.config.display()))?;
    let mut cfg = parse_config(&document).map_err(|e| e.to_string())?;
    if cfg.command != expected {
        return Err(format!(
            "configuration requests `{}` but the `{}` subcommand was invoked",
            cfg.command.name(),
            expected.name()
        ));
    }
    if let Some(out) = &common.out {
        cfg.out = Some(out.clone());
    }
    if let Some(seed) = common.seed {
        cfg.mc.seed = seed;
    }
    if let Some(samples) = common.samples {
        cfg.mc.samples = samples;
    }
    run(&cfg).map_err(|e| e.to_string())
}
