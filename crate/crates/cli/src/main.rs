use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qri_cli::config::{ExperimentConfig, ExperimentKind, InitialStateSpec};
use qri_cli::error::CliError;
use qri_cli::presets::preset;
use qri_core::metrics::Metric;

/// Repeated-interaction qubit simulator and resource estimator.
#[derive(Parser)]
#[command(name = "qri", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate collisions and export the trajectory as CSV.
    Simulate(RunArgs),
    /// Closed-form relaxation summary (JSON) or surface (CSV with axes).
    Steady(RunArgs),
    /// Convergence runtime n* and invested work for one configuration.
    Resources(RunArgs),
    /// Randomized-collision thermalization ensemble.
    Thermalize(RunArgs),
    /// Resource sweep over a parameter/epsilon grid (both metrics).
    Sweep(RunArgs),
    /// Emit a frozen example config (fig2 .. fig11).
    Preset {
        /// Preset id, e.g. fig2.
        id: String,
        /// Write the config here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Path of the experiment config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the RNG seed (initial state draw, or the protocol seed for
    /// thermalize).
    #[arg(long)]
    seed: Option<u64>,
    /// Record every k-th collision only.
    #[arg(long)]
    stride: Option<u64>,
    /// Collision budget: trajectory length for simulate, per-seed cap for
    /// thermalize, search cap for resources/sweep.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Convergence threshold for resources/sweep.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Convergence metric: trace | infidelity.
    #[arg(long)]
    metric: Option<String>,
}

fn load_config(args: &RunArgs, kind: ExperimentKind) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        path: args.config.display().to_string(),
        source,
    })?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if config.kind != kind {
        return Err(CliError::Validation(format!(
            "config kind '{}' does not match the '{}' subcommand",
            config.kind.name(),
            kind.name()
        )));
    }
    if let Some(out) = &args.out {
        config.output_path = out.display().to_string();
    }
    if let Some(seed) = args.seed {
        if kind == ExperimentKind::Thermalize {
            if let Some(protocol) = config.protocol.as_mut() {
                protocol.seed = seed;
            }
        } else {
            config.initial_state = InitialStateSpec::Random { random_seed: seed };
        }
    }
    if let Some(stride) = args.stride {
        config.stride = stride;
    }
    if let Some(max_steps) = args.max_steps {
        match kind {
            ExperimentKind::Simulate => config.n_steps = max_steps,
            ExperimentKind::Thermalize => {
                if let Some(protocol) = config.protocol.as_mut() {
                    protocol.n_max = max_steps;
                }
            }
            _ => config.max_steps = max_steps,
        }
    }
    if let Some(epsilon) = args.epsilon {
        config.epsilon = epsilon;
    }
    if let Some(metric) = &args.metric {
        config.metric = match metric.as_str() {
            "trace" | "trace_distance" => Metric::TraceDistance,
            "infidelity" => Metric::Infidelity,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown metric '{other}' (expected trace or infidelity)"
                )))
            }
        };
    }
    config.validate()?;
    Ok(config)
}

fn dispatch(command: Command) -> Result<String, CliError> {
    let (args, kind) = match command {
        Command::Preset { id, out } => {
            let config = preset(&id)?;
            let text = config.to_json();
            return match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    Ok(format!("preset {id} -> {}", path.display()))
                }
                None => Ok(text),
            };
        }
        Command::Simulate(a) => (a, ExperimentKind::Simulate),
        Command::Steady(a) => (a, ExperimentKind::Steady),
        Command::Resources(a) => (a, ExperimentKind::Resources),
        Command::Thermalize(a) => (a, ExperimentKind::Thermalize),
        Command::Sweep(a) => (a, ExperimentKind::Sweep),
    };
    let config = load_config(&args, kind)?;
    let outcome = qri_cli::run(&config)?;
    Ok(outcome.summary_line)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
