use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ell1::csvio::{create, write_stream, write_trace};
use ell1::experiment::{self, BoundKind, ExperimentSpec, ForecasterId, ForecasterSpec, StreamSpec};
use ell1::sweep::{run_sweep, write_sweep, SweepConfig};
use ell1::{config, verify, HarnessError};
use ell1_core::sequences::{StreamConfig, StreamKind};

/// Online linear regression on l1-balls: run forecasters, check regret
/// bounds, sweep kappa and dump streams.
#[derive(Parser)]
#[command(name = "ell1", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one forecaster on one stream and check the requested bounds.
    Run(RunArgs),
    /// Sweep kappa across the regime transition.
    SweepKappa(SweepArgs),
    /// Run an acceptance suite and print a pass/fail table.
    Verify {
        /// One of: lemmas, gradients, sandwich, eg, leg, ewa, maurey, scaling, regime, repro, all.
        suite: String,
    },
    /// Write a generated stream as CSV.
    Gen(GenArgs),
}

#[derive(Args)]
struct StreamArgs {
    /// Generator: uniform, zero, sparse or sinusoidal.
    #[arg(long, default_value = "uniform")]
    kind: String,
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    horizon: usize,
    #[arg(long, default_value_t = 1.0)]
    x_max: f64,
    #[arg(long, default_value_t = 1.0)]
    y_max: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nonzero coordinates of the sparse generator's target.
    #[arg(long, default_value_t = 1)]
    sparsity: usize,
    /// Standard deviation of the sparse generator's noise.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// l1 norm of the sparse generator's target.
    #[arg(long, default_value_t = 1.0)]
    target_radius: f64,
    /// Comma-separated weights of the sinusoidal model (defaults to e_1).
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
}

impl StreamArgs {
    fn config(&self) -> StreamConfig {
        StreamConfig {
            dim: self.dim,
            horizon: self.horizon,
            x_max: self.x_max,
            y_max: self.y_max,
            seed: self.seed,
        }
    }

    fn kind(&self) -> Result<StreamKind, HarnessError> {
        Ok(match self.kind.as_str() {
            "uniform" => StreamKind::Uniform,
            "zero" => StreamKind::Zero,
            "sparse" => StreamKind::SparseLinear {
                sparsity: self.sparsity,
                noise: self.noise,
                radius: self.target_radius,
            },
            "sinusoidal" => {
                let weights = if self.weights.is_empty() {
                    let mut w = vec![0.0; self.dim];
                    if let Some(first) = w.first_mut() {
                        *first = 1.0;
                    }
                    w
                } else {
                    self.weights.clone()
                };
                StreamKind::Sinusoidal { weights, gamma: self.gamma, sigma: self.sigma }
            }
            other => {
                return Err(HarnessError::spec(format!(
                    "unknown generator `{other}` (expected one of: uniform, zero, sparse, sinusoidal)"
                )))
            }
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// One of: null, eg, leg, maurey, scaling, adaptive.
    #[arg(long, default_value = "eg")]
    forecaster: String,
    /// Radius U of the forecaster and the comparator ball.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Loss exponent; values other than 2 need leg or null.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Fixed learning rate for eg instead of self-confident tuning.
    #[arg(long)]
    eta: Option<f64>,
    /// Growth exponent of the adaptive forecaster's grid.
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    /// Comma-separated bounds to check; defaults depend on the forecaster.
    #[arg(long, value_delimiter = ',')]
    bounds: Vec<String>,
    /// Comparator duality-gap tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Read the stream from a CSV file instead of generating it.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Trace CSV destination.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Summary destination; stdout when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    stream: StreamArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    y_max: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    kappas: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; overrides ELL1_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    stream: StreamArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn io_err(path: Option<&Path>) -> impl Fn(std::io::Error) -> HarnessError + '_ {
    move |e| HarnessError::io(path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf), e)
}

fn cmd_run(args: RunArgs) -> Result<bool, HarnessError> {
    let stream = match &args.input {
        Some(path) => StreamSpec::File(path.clone()),
        None => StreamSpec::Generated { config: args.stream.config(), kind: args.stream.kind()? },
    };
    let spec = ExperimentSpec {
        forecaster: ForecasterSpec {
            id: args.forecaster.parse::<ForecasterId>()?,
            radius: args.radius,
            eta: args.eta,
            k: args.k,
        },
        stream,
        alpha: args.alpha,
        bounds: args.bounds.iter().map(|b| b.parse::<BoundKind>()).collect::<Result<_, _>>()?,
        tolerance: args.tolerance,
    };
    let report = experiment::run(&spec)?;
    if let Some(path) = &args.trace {
        let mut w = sink(Some(path))?;
        write_trace(&mut w, &report.trace)?;
        w.flush().map_err(io_err(Some(path)))?;
    }
    let target = args.summary.as_deref();
    let mut w = sink(target)?;
    report.write_summary(&mut w).map_err(io_err(target))?;
    w.flush().map_err(io_err(target))?;
    Ok(report.passed())
}

fn cmd_sweep(args: SweepArgs) -> Result<bool, HarnessError> {
    let cfg = SweepConfig {
        dim: args.dim,
        y_max: args.y_max,
        kappas: args.kappas,
        trials: args.trials,
        seed: args.seed,
        threads: args.threads,
    };
    let rows = run_sweep(&cfg)?;
    let target = args.out.as_deref();
    let mut w = sink(target)?;
    write_sweep(&mut w, &rows)?;
    w.flush().map_err(io_err(target))?;
    Ok(true)
}

fn cmd_verify(suite: &str) -> Result<bool, HarnessError> {
    let checks = verify::run_suite(suite)?;
    let mut out = std::io::stdout().lock();
    verify::write_table(&mut out, &checks).map_err(io_err(None))?;
    Ok(verify::all_passed(&checks))
}

fn cmd_gen(args: GenArgs) -> Result<bool, HarnessError> {
    let rounds = ell1_core::sequences::generate(&args.stream.config(), &args.stream.kind()?)?;
    let target = args.out.as_deref();
    let mut w = sink(target)?;
    write_stream(&mut w, &rounds)?;
    w.flush().map_err(io_err(target))?;
    Ok(true)
}

fn main() -> ExitCode {
    let args = match config::expand_spec_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::SweepKappa(a) => cmd_sweep(a),
        Command::Verify { suite } => cmd_verify(&suite),
        Command::Gen(a) => cmd_gen(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
