use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use intsnn_cli::commands::{self, Outcome};
use intsnn_cli::config::{ConfigError, RunConfig, Variant};
use intsnn_core::Manifest;

/// Integer-state spiking network simulator and sweep harness.
#[derive(Parser)]
#[command(name = "intsnn", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Worker threads (0 = all cores). Falls back to INTSNN_WORKERS.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Skip SVG figures.
    #[arg(long, global = true)]
    no_figures: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one network and record its full trajectory.
    Simulate {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 8)]
        bits: u32,
        /// Initial-condition index within the cell.
        #[arg(long, default_value_t = 0)]
        seed: usize,
    },
    /// Run a parameter grid and write per-run metrics plus a summary.
    Sweep {
        /// global, focused or variant-k8.
        #[arg(long)]
        variant: Option<String>,
        /// Re-run the grid recorded in a previous manifest.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Several initial conditions on one topology per bit width.
    Focused {
        /// Bit widths, e.g. `1..16` or `4,8,16`.
        #[arg(long)]
        bits: Option<String>,
    },
    /// Enumerate every state of a small network and verify cycle detection.
    Oracle {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        bits: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Master seed for the network.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Maximum number of states to enumerate.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Summarize an existing results CSV.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

fn build_config(
    common: &Common,
    default: Variant,
    extra: &[String],
) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load_with_default(path, default)?,
        None => RunConfig::for_variant(default),
    };
    cfg.apply_overrides(extra)?;
    cfg.apply_overrides(&common.overrides)?;
    if let Some(w) = common.workers {
        cfg.workers = Some(w);
    }
    if let Some(out) = &common.output {
        cfg.output_dir = out.clone();
    }
    if common.no_figures {
        cfg.figures = false;
    }
    Ok(cfg)
}

fn read_manifest(path: &PathBuf) -> Result<Manifest> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Manifest::from_json(&text)?)
}

fn run(cli: Cli) -> Result<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Simulate {
            n,
            density,
            bits,
            seed,
        } => {
            let cfg = build_config(common, Variant::Global, &[])?;
            commands::cmd_simulate(&cfg, *n, *density, *bits, *seed)
        }
        Command::Sweep { variant, manifest } => {
            let extra: Vec<String> = variant.iter().map(|v| format!("variant={v}")).collect();
            let cfg = build_config(common, Variant::Global, &extra)?;
            let manifest = manifest.as_ref().map(read_manifest).transpose()?;
            commands::cmd_sweep(&cfg, manifest.as_ref())
        }
        Command::Focused { bits } => {
            let extra: Vec<String> = bits.iter().map(|b| format!("bit_widths={b}")).collect();
            let cfg = build_config(common, Variant::Focused, &extra)?;
            commands::cmd_focused(&cfg)
        }
        Command::Oracle {
            n,
            bits,
            density,
            seed,
            budget,
        } => {
            let cfg = build_config(common, Variant::Global, &[])?;
            let budget = budget.unwrap_or(cfg.state_budget);
            commands::cmd_oracle(&cfg, *n, *bits, *density, *seed, budget)
        }
        Command::Report { results, manifest } => {
            let cfg = build_config(common, Variant::Global, &[])?;
            let manifest = manifest.as_ref().map(read_manifest).transpose()?;
            commands::cmd_report(&cfg, results, manifest.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for file in &outcome.files {
                eprintln!("wrote {}", file.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<ConfigError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
