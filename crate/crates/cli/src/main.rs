use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use udw_cli::{config, eval_point, parse_kv, presets, run_sweep, write_csv, ConfigError, Params, SweepSpec};
use udw_core::oracle::{regenerate_corpus, OracleConfig};
use udw_core::{ElementConfig, GenericConfig};

const CONFIG_ERROR: u8 = 1;
const BUDGET_EXHAUSTED: u8 = 2;

/// Entanglement of two Unruh-DeWitt detectors in Minkowski and shockwave
/// spacetimes.
#[derive(Parser)]
#[command(name = "udw", version)]
struct Cli {
    /// Relative tolerance of the double integrals; the momentum integrals
    /// use the smaller of this and 1e-10.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluates one scenario file and prints every intermediate quantity.
    Eval {
        config: PathBuf,
        /// Print JSON instead of key = value text.
        #[arg(long)]
        json: bool,
    },
    /// Runs a sweep file (scenario keys plus `axis1`, optional `axis2`).
    Sweep { config: PathBuf },
    /// Regenerates a figure dataset.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(presets::NAMES))]
        name: String,
        /// Grid points per continuous axis instead of the default resolution.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Reference-value tools.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Recomputes the golden corpus by brute-force quadrature.
    Regenerate {
        /// Simpson points per grid dimension.
        #[arg(long, default_value_t = OracleConfig::default().grid_points_per_dim)]
        grid: usize,
    },
}

fn read_config(path: &Path) -> Result<config::KeyMap, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        field: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_kv(&text)
}

fn output(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("udw: {message}");
    ExitCode::from(code)
}

fn sweep(spec: &SweepSpec, cli: &Cli, cfg: &ElementConfig) -> ExitCode {
    let rows = match run_sweep(spec, cfg, cli.workers) {
        Ok(rows) => rows,
        Err(e) => return fail(CONFIG_ERROR, e),
    };
    let written = output(&cli.out).map_err(csv::Error::from).and_then(|w| write_csv(w, &rows));
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(CONFIG_ERROR, format!("cannot write output: {e}")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return fail(CONFIG_ERROR, format!("--tol must lie in (0, 1), got {}", cli.tol));
    }
    let cfg = ElementConfig {
        k_tol: cli.tol.min(1e-10),
        generic: GenericConfig::new(cli.tol),
    };
    match &cli.command {
        Command::Eval { config, json } => {
            let params = match read_config(config).and_then(|m| Params::from_map(&m)) {
                Ok(p) => p,
                Err(e) => return fail(CONFIG_ERROR, e),
            };
            let result = match eval_point(&params, &cfg) {
                Ok(r) => r,
                Err(e) if e.is_budget() => return fail(BUDGET_EXHAUSTED, e),
                Err(e) => return fail(CONFIG_ERROR, e),
            };
            let text = if *json {
                serde_json::to_string_pretty(&result).expect("plain data serializes") + "\n"
            } else {
                result.to_text()
            };
            let written = output(&cli.out).and_then(|mut w| {
                w.write_all(text.as_bytes())?;
                w.flush()
            });
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(CONFIG_ERROR, format!("cannot write output: {e}")),
            }
        }
        Command::Sweep { config } => match read_config(config).and_then(SweepSpec::from_map) {
            Ok(spec) => sweep(&spec, &cli, &cfg),
            Err(e) => fail(CONFIG_ERROR, e),
        },
        Command::Preset { name, steps } => {
            if steps.is_some_and(|n| n < 2) {
                return fail(CONFIG_ERROR, "--steps needs at least 2");
            }
            let spec = presets::preset(name, *steps).expect("name checked by the argument parser");
            sweep(&spec, &cli, &cfg)
        }
        Command::Oracle {
            action: OracleAction::Regenerate { grid },
        } => {
            let oracle = OracleConfig {
                grid_points_per_dim: *grid,
                ..OracleConfig::default()
            };
            let text = match regenerate_corpus(&oracle) {
                Ok(t) => t,
                Err(e) => return fail(BUDGET_EXHAUSTED, e),
            };
            let written = output(&cli.out).and_then(|mut w| {
                w.write_all(text.as_bytes())?;
                w.flush()
            });
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(CONFIG_ERROR, format!("cannot write output: {e}")),
            }
        }
    }
}
