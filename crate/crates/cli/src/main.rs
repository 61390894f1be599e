mod commands;
mod output;
mod reproduce;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ctensor::admm::AdmmParams;
use ctensor::DEFAULT_BUDGET;

use commands::{CliError, CliResult, Ctx, HypergraphTensor, MinimizeArgs, PsdArgs, Report};
use reproduce::{TableArgs, Target};

#[derive(Parser)]
#[command(
    name = "ctensor",
    version,
    about = "Spectra, structure and semi-definiteness of circulant tensors"
)]
struct Cli {
    /// Output format; csv gives the tabular part of the result.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for multi-start runs (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Native eigenvalues, Gershgorin disc and identifiable extreme H-eigenvalue.
    Eig { input: PathBuf },
    /// Sign class, B0/B membership and structural predicates.
    Classify { input: PathBuf },
    /// Positive semi-definiteness verdict with certificate or witness.
    Psd {
        input: PathBuf,
        /// Fall back to a multi-start numeric search for a witness.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    /// Minimize the form over the unit sphere with multi-start ADMM.
    Minimize {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.2, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// Known minimum; enables the success rate.
        #[arg(long, allow_negative_numbers = true)]
        reference: Option<f64>,
        /// Leave wall-clock timings out so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Tensors of a circulant hypergraph given by generator edges.
    Hypergraph {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = HypergraphTensor::Adjacency)]
        tensor: HypergraphTensor,
    },
    /// Empirical moment tensor of periodic trajectories (CSV, one per row).
    Moments {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long)]
        period: usize,
    },
    /// Rerun the bundled worked examples.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_timing: bool,
    },
}

fn budget() -> CliResult<usize> {
    match std::env::var("CTENSOR_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("CTENSOR_BUDGET is not a count: {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn dispatch(command: Command, ctx: &Ctx) -> CliResult<Report> {
    match command {
        Command::Eig { input } => commands::eig(&input),
        Command::Classify { input } => commands::classify(&input, ctx),
        Command::Psd {
            input,
            numeric,
            seed,
            restarts,
        } => commands::psd(
            &input,
            &PsdArgs {
                numeric,
                seed,
                restarts,
            },
            ctx,
        ),
        Command::Minimize {
            input,
            restarts,
            seed,
            beta,
            eps,
            max_iters,
            reference,
            no_timing,
        } => commands::minimize(
            &input,
            &MinimizeArgs {
                params: AdmmParams {
                    beta,
                    epsilon: eps,
                    max_iters,
                    seed,
                },
                restarts,
                reference,
                timing: !no_timing,
            },
            ctx,
        ),
        Command::Hypergraph { input, tensor } => commands::hypergraph(&input, tensor),
        Command::Moments {
            input,
            order,
            period,
        } => commands::moments(&input, order, period, ctx),
        Command::Reproduce {
            target,
            restarts,
            seed,
            no_timing,
        } => reproduce::run(
            target,
            &TableArgs {
                restarts,
                seed,
                timing: !no_timing,
            },
        ),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Input("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let ctx = Ctx { budget: budget()? };
    let report = dispatch(cli.command, &ctx)?;
    let bytes = match cli.format {
        Format::Json => report.json,
        Format::Csv => report.table.to_csv(),
    };
    match cli.output {
        Some(path) => std::fs::write(&path, bytes)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|()| out.flush())
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ctensor: {e}");
            ExitCode::from(e.code())
        }
    }
}
