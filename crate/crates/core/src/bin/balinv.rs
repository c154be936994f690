use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use balinv::bench::{
    self, format_solution, rows_to_csv, run_beta_fit, run_solve, worst_case_to_csv, ScanConfig,
};
use balinv::{FitOptions, PreconditionerKind, SolveOptions};

/// Structured approximate inverse benchmarks.
///
/// Random matrices come from ChaCha8 seeded with the 64-bit `--seed`; each
/// trial uses stream (n << 32) | trial, so output is byte-identical for
/// identical flags.
#[derive(Parser)]
#[command(name = "balinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScanArgs {
    /// Comma-separated dimensions.
    #[arg(long = "n", value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Lower bound for off-diagonal entries.
    #[arg(long = "m")]
    m: f64,
    /// Upper bound for off-diagonal entries.
    #[arg(long = "M")]
    big_m: f64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ScanArgs {
    fn config(&self) -> ScanConfig {
        ScanConfig {
            n_list: self.n.clone(),
            m: self.m,
            big_m: self.big_m,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Observed error against the certified bound, one CSV row per n.
    ErrorScan(ScanArgs),
    /// Log-log slope of the mean error in n - 1.
    RateFit(ScanArgs),
    /// Scaled error (n-1)²·‖T⁻¹ - S‖ on the worst-case family.
    WorstCase {
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long = "m")]
        m: f64,
        #[arg(long = "M")]
        big_m: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve T·x = b with preconditioned conjugate gradients.
    Solve {
        matrix_file: PathBuf,
        rhs_file: PathBuf,
        #[arg(long, default_value = "damped-s")]
        pre: PreconditionerKind,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Fit the beta-model to a degree sequence.
    BetaFit {
        degrees_file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::ErrorScan(args) => {
            let rows = bench::error_scan(&args.config()).map_err(|e| e.to_string())?;
            emit(args.out.as_ref(), &rows_to_csv(&rows))?;
            Ok(true)
        }
        Command::RateFit(args) => {
            let fit = bench::rate_fit(&args.config()).map_err(|e| e.to_string())?;
            if let Some(path) = &args.out {
                emit(Some(path), &rows_to_csv(&fit.rows))?;
            }
            println!("slope {}", bench::fmt_f64(fit.slope));
            println!("intercept {}", bench::fmt_f64(fit.intercept));
            Ok(true)
        }
        Command::WorstCase { n, m, big_m, out } => {
            let rows = bench::worst_case(&n, m, big_m).map_err(|e| e.to_string())?;
            emit(out.as_ref(), &worst_case_to_csv(&rows))?;
            Ok(true)
        }
        Command::Solve {
            matrix_file,
            rhs_file,
            pre,
            tol,
            max_iter,
        } => {
            let matrix = read(&matrix_file)?;
            let rhs = read(&rhs_file)?;
            let (x, report) = run_solve(&matrix, &rhs, pre, SolveOptions { tol, max_iter })
                .map_err(|e| e.to_string())?;
            print!("{}", format_solution(&x, &report));
            Ok(report.converged)
        }
        Command::BetaFit {
            degrees_file,
            tol,
            max_iter,
        } => {
            let degrees = read(&degrees_file)?;
            let opts = FitOptions {
                tol,
                max_iter,
                ..FitOptions::default()
            };
            let (beta, report) = run_beta_fit(&degrees, opts).map_err(|e| e.to_string())?;
            print!("{}", format_solution(beta.as_slice(), &report));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: did not converge");
            ExitCode::from(2)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
