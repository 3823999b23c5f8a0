use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wiretap_cli::{det, parse_config, parse_validate_config, run_sweep, run_validation, to_csv, write_atomic};
use wiretap_cli::{CliError, CliResult, ValidateConfig};
use wiretap_core::McPlan;

/// Secrecy outage curves for correlated wiretap channels.
#[derive(Parser)]
#[command(name = "wiretap-sop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sweep config and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the config's `output`, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the cross-check suite and print a JSON report.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print U and det(U) for the given coefficients or a full correlation matrix.
    Det {
        /// Comma-separated coefficients, e.g. 0.85,0.9,-0.95.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix", required_unless_present = "matrix")]
        eta: Option<String>,
        /// Rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.clone(), source: e })
}

// Errors (a closed pipe included) surface as I/O failures instead of a panic.
fn emit(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep { config, out, seed, trials, workers } => {
            let mut spec = parse_config(&read(&config)?)?;
            let mc = &spec.mc;
            spec.mc = McPlan::new(trials.unwrap_or(mc.trials), seed.unwrap_or(mc.seed), workers.unwrap_or(mc.workers))
                .map_err(|e| CliError::Config(format!("mc: {e}")))?;
            let csv = to_csv(&run_sweep(&spec)?);
            match out.or(spec.output) {
                Some(path) => write_atomic(&path, &csv),
                None => emit(&csv),
            }
        }
        Command::Validate { config } => {
            let opts = match config {
                Some(path) => parse_validate_config(&read(&path)?)?,
                None => ValidateConfig::default(),
            };
            let report = run_validation(&opts);
            let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?;
            emit(&format!("{json}\n"))?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                Err(CliError::Validation(failed.join(", ")))
            }
        }
        Command::Det { eta, matrix } => {
            let eta = match (eta, matrix) {
                (Some(list), _) => det::eta_from_list(&list)?,
                (None, Some(m)) => det::eta_from_matrix(&m)?,
                (None, None) => unreachable!("clap requires one of --eta and --matrix"),
            };
            emit(&det::report(&eta)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
