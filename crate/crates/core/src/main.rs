use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ogmr::experiments::{
    named_coefficients, rho_curve_csv, run_experiment, summary_csv, table3_csv, Experiment, ExperimentSpec,
    PROX_METHODS, SMOOTH_METHODS,
};
use ogmr::schedules::Coefficients;

#[derive(Parser)]
#[command(
    name = "ogmr",
    version,
    about = "Accelerated first-order methods with adaptive restart"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Case1,
    Case2,
    Logsumexp,
    Lasso,
    Boxqp,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Case1 => Experiment::Case1,
            ExperimentArg::Case2 => Experiment::Case2,
            ExperimentArg::Logsumexp => Experiment::LogSumExp,
            ExperimentArg::Lasso => Experiment::Lasso,
            ExperimentArg::Boxqp => Experiment::BoxQp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment family and write trace CSVs plus a summary.
    Run(Box<RunArgs>),
    /// Print the tuned-coefficient table for a condition ratio q.
    Table3 {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print per-eigenvalue root magnitudes for constant coefficients.
    RhoCurve {
        #[arg(long)]
        q: f64,
        /// Named constant method (gm, gm-q, fgm-q, fgmp-q, ogm-q).
        #[arg(long, conflicts_with_all = ["beta", "gamma", "alpha"])]
        method: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 201)]
        n_lambda: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    experiment: ExperimentArg,
    /// Plain key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sigma_bar: Option<f64>,
    /// Restart for solvers listed without a suffix: none, fr or gr.
    #[arg(long)]
    restart: Option<String>,
    /// Comma-separated `method[+fr|+gr|+fixed][@sigma_bar]` list.
    #[arg(long)]
    solvers: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    /// Comma-separated list.
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    cond: Option<f64>,
    #[arg(long)]
    noise_var: Option<f64>,
    /// Multiplier of the box-QP linear term.
    #[arg(long)]
    p_scale: Option<f64>,
    /// Relative-gap level for the summary.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    ref_iters: Option<usize>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> Result<()> {
    let mut spec = ExperimentSpec::defaults(args.experiment.into());
    if let Some(path) = &args.config {
        spec.apply_config_file(path)
            .with_context(|| format!("reading config {}", path.display()))?;
    }
    let overrides: [(&str, Option<String>); 17] = [
        ("iters", args.iters.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("out", args.out.map(|v| v.display().to_string())),
        ("sigma_bar", args.sigma_bar.map(|v| v.to_string())),
        ("restart", args.restart),
        ("solvers", args.solvers),
        ("d", args.d.map(|v| v.to_string())),
        ("q", args.q.map(|v| v.to_string())),
        ("m", args.m.map(|v| v.to_string())),
        ("s", args.s.map(|v| v.to_string())),
        ("tau", args.tau.map(|v| v.to_string())),
        ("eta", args.eta),
        ("cond", args.cond.map(|v| v.to_string())),
        ("noise_var", args.noise_var.map(|v| v.to_string())),
        ("p_scale", args.p_scale.map(|v| v.to_string())),
        ("tol", args.tol.map(|v| v.to_string())),
        ("ref_iters", args.ref_iters.map(|v| v.to_string())),
    ];
    let iters_given = overrides[0].1.is_some();
    for (key, value) in overrides {
        if let Some(v) = value {
            spec.set(key, &v)?;
        }
    }
    if iters_given && args.ref_iters.is_none() {
        spec.ref_iters = 10 * spec.iters;
    }
    let output = run_experiment(&spec)?;
    print!("{}", summary_csv(&output.rows));
    eprintln!("wrote {} files to {}", output.files.len(), spec.out.display());
    Ok(())
}

fn usage_hint() -> String {
    format!(
        "solvers: {} (proximal: {}), each with an optional +fr, +gr or +fixed suffix and @sigma_bar",
        SMOOTH_METHODS.join(", "),
        PROX_METHODS.join(", ")
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(ogmr::Error::UnknownSolver(_) | ogmr::Error::InvalidConfig(_)) = err.downcast_ref() {
                eprintln!("{}", usage_hint());
            }
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(*args),
        Command::Table3 { q, out } => emit(&table3_csv(q)?, out.as_ref()),
        Command::RhoCurve {
            q,
            method,
            alpha,
            beta,
            gamma,
            n_lambda,
            out,
        } => {
            let (label, coeffs) = match (method, beta, gamma) {
                (Some(m), _, _) => {
                    let c = named_coefficients(&m, q)?;
                    (m, c)
                }
                (None, Some(b), Some(g)) => ("custom".to_string(), Coefficients::new(alpha, b, g)),
                _ => bail!("rho-curve needs --method or both --beta and --gamma"),
            };
            emit(&rho_curve_csv(q, &label, coeffs, n_lambda)?, out.as_ref())
        }
    }
}
