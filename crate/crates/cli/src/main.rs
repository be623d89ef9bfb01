use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadcoh::measures::Comparator;
use quadcoh_cli::commands::{
    cmd_beamsplit, cmd_coherence, cmd_fig1, cmd_selftest, cmd_sweep, load_state, Failure, SweepKind, Table,
};
use quadcoh_cli::output::emit;
use quadcoh_cli::{CliError, OutputFormat, RunConfig};

/// Quadrature-basis coherence of optical field states.
#[derive(Debug, Parser)]
#[command(name = "quadcoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// JSON state description.
    #[arg(long, global = true)]
    state: Option<PathBuf>,
    /// Second state for two-mode commands.
    #[arg(long, global = true)]
    state2: Option<PathBuf>,
    /// Comma-separated sweep parameters (`x0:y0` pairs for displacements).
    #[arg(long, global = true, allow_hyphen_values = true)]
    param: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, global = true)]
    nmax: Option<usize>,
    #[arg(long, global = true)]
    sigma: Option<f64>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, value_parser = parse_comparator)]
    comparator: Option<Comparator>,
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Both measures for one state.
    Coherence,
    /// Number states against Gaussian states of equal energy, n = 0..nmax.
    Fig1,
    /// Measures along a family of transformed states.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
    },
    /// Coherence before and after a beam splitter.
    Beamsplit,
    /// Runs the acceptance checks.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

fn parse_comparator(s: &str) -> Result<Comparator, String> {
    match s {
        "squeezed_vacuum" => Ok(Comparator::SqueezedVacuum),
        "coherent" => Ok(Comparator::Coherent),
        other => Err(format!("unknown comparator {other:?} (squeezed_vacuum or coherent)")),
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("QUADCOH_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("QUADCOH_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(())
}

fn sweep_params(cli: &Cli, kind: SweepKind) -> Result<String, CliError> {
    if let Some(p) = &cli.param {
        return Ok(p.clone());
    }
    let single = match kind {
        SweepKind::Squeeze => cli.lambda,
        SweepKind::Rotate => cli.theta,
        SweepKind::Sigma => cli.sigma,
        SweepKind::Displace => None,
    };
    single
        .map(|v| v.to_string())
        .ok_or_else(|| CliError::Input("missing --param LIST".into()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        config.output_format = f;
    }
    if let Some(c) = cli.comparator {
        config.comparator = c;
    }
    let result: Result<Table, Failure> = match &cli.command {
        Command::Selftest { json } => {
            let (text, failed) = cmd_selftest(&config, *json);
            emit(&text, cli.out.as_deref())?;
            return if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::SelftestFailed(failed))
            };
        }
        Command::Coherence => cmd_coherence(&load_state(cli.state.as_deref(), "--state")?, &config),
        Command::Fig1 => cmd_fig1(cli.nmax.unwrap_or(20), &config),
        Command::Sweep { kind } => {
            let state = load_state(cli.state.as_deref(), "--state")?;
            cmd_sweep(*kind, &state, &sweep_params(cli, *kind)?, &config)
        }
        Command::Beamsplit => {
            let s1 = load_state(cli.state.as_deref(), "--state")?;
            let s2 = load_state(cli.state2.as_deref(), "--state2")?;
            let theta = cli.theta.ok_or_else(|| CliError::Input("missing --theta".into()))?;
            cmd_beamsplit(&s1, &s2, theta, &config)
        }
    };
    match result {
        Ok(table) => emit(&table.render(config.output_format)?, cli.out.as_deref()),
        Err(Failure { partial, error }) => {
            if let Some(t) = partial {
                emit(&t.render(config.output_format)?, cli.out.as_deref())?;
            }
            Err(error)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quadcoh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
