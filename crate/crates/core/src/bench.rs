//! Reproducible experiment drivers.
//!
//! Each trial draws its matrix from a `ChaCha8Rng` seeded with the run
//! seed and switched to stream `(n << 32) | trial`, so a row depends only
//! on `(seed, n, trial)` and never on evaluation order.
//!
//! Floats in CSV output are printed with 17 significant digits.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approx::{error_bound, StructuredInverse};
use crate::beta::{fit_mle, BetaParams, DegreeSequence, FitOptions};
use crate::dense::{exact_inverse, ORACLE_MAX_DIM};
use crate::error::{Error, Result};
use crate::matrix::{
    check_bounds, parse_matrix, random_balanced_with, worst_case_family, MIN_DIM,
    MIN_WORST_CASE_DIM,
};
use crate::pcg::{pcg, Preconditioner, PreconditionerKind, SolveOptions, SolveReport};

pub const SCAN_HEADER: &str = "n,m,M,trials,mean_error,max_error,bound,max_ratio,seed";
pub const WORST_CASE_HEADER: &str = "n,m,M,error,scaled_error,target";

/// Minimum number of distinct `n` values for a rate fit.
pub const MIN_RATE_POINTS: usize = 4;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Generator for trial `trial` at dimension `n`.
pub fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | trial as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub n_list: Vec<usize>,
    pub m: f64,
    pub big_m: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub m: f64,
    pub big_m: f64,
    pub trials: usize,
    pub mean_error: f64,
    pub max_error: f64,
    pub bound: f64,
    pub max_ratio: f64,
    pub seed: u64,
}

impl ExperimentRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            fmt_f64(self.m),
            fmt_f64(self.big_m),
            self.trials,
            fmt_f64(self.mean_error),
            fmt_f64(self.max_error),
            fmt_f64(self.bound),
            fmt_f64(self.max_ratio),
            self.seed
        )
    }
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

fn validate_scan(cfg: &ScanConfig) -> Result<()> {
    check_bounds(cfg.m, cfg.big_m)?;
    if cfg.trials == 0 {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    for &n in &cfg.n_list {
        if n < MIN_DIM {
            return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
        }
        if n > ORACLE_MAX_DIM {
            return Err(Error::OracleTooLarge {
                n,
                max: ORACLE_MAX_DIM,
            });
        }
    }
    Ok(())
}

/// Sup-norm error of `S` on `trials` random balanced matrices per `n`,
/// against the balanced error bound.
pub fn error_scan(cfg: &ScanConfig) -> Result<Vec<ExperimentRow>> {
    validate_scan(cfg)?;
    cfg.n_list
        .iter()
        .map(|&n| {
            let bound = error_bound(cfg.m, cfg.big_m, n)?.bound;
            let mut sum = 0.0;
            let mut max_error = 0.0f64;
            for trial in 0..cfg.trials {
                let mut rng = trial_rng(cfg.seed, n, trial);
                let t = random_balanced_with(&mut rng, n, cfg.m, cfg.big_m)?;
                let err = exact_inverse(&t)?
                    .sub(&StructuredInverse::build(&t).to_dense())
                    .sup_norm();
                sum += err;
                max_error = max_error.max(err);
            }
            Ok(ExperimentRow {
                n,
                m: cfg.m,
                big_m: cfg.big_m,
                trials: cfg.trials,
                mean_error: sum / cfg.trials as f64,
                max_error,
                bound,
                max_ratio: max_error / bound,
                seed: cfg.seed,
            })
        })
        .collect()
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    /// Slope of `log(mean_error)` against `log(n - 1)`.
    pub slope: f64,
    pub intercept: f64,
    pub rows: Vec<ExperimentRow>,
}

/// Empirical convergence order of the mean error in `n - 1`. Repeated `n`
/// values are dropped before fitting.
pub fn rate_fit(cfg: &ScanConfig) -> Result<RateFit> {
    let mut n_list = cfg.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();
    if n_list.len() < MIN_RATE_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_RATE_POINTS,
            got: n_list.len(),
        });
    }
    let rows = error_scan(&ScanConfig {
        n_list,
        ..cfg.clone()
    })?;
    let xs: Vec<f64> = rows.iter().map(|r| ((r.n - 1) as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_error.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    Ok(RateFit {
        slope,
        intercept,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCaseRow {
    pub n: usize,
    pub m: f64,
    pub big_m: f64,
    pub error: f64,
    /// `(n-1)²·error`.
    pub scaled_error: f64,
    /// `1/m`.
    pub target: f64,
}

impl WorstCaseRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            fmt_f64(self.m),
            fmt_f64(self.big_m),
            fmt_f64(self.error),
            fmt_f64(self.scaled_error),
            fmt_f64(self.target)
        )
    }
}

pub fn worst_case_to_csv(rows: &[WorstCaseRow]) -> String {
    let mut out = String::from(WORST_CASE_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

/// Scaled error of `S` on the worst-case family for each `n`.
pub fn worst_case(n_list: &[usize], m: f64, big_m: f64) -> Result<Vec<WorstCaseRow>> {
    check_bounds(m, big_m)?;
    for &n in n_list {
        if n < MIN_WORST_CASE_DIM {
            return Err(Error::DimensionTooSmall {
                n,
                min: MIN_WORST_CASE_DIM,
            });
        }
        if n > ORACLE_MAX_DIM {
            return Err(Error::OracleTooLarge {
                n,
                max: ORACLE_MAX_DIM,
            });
        }
    }
    n_list
        .iter()
        .map(|&n| {
            let t = worst_case_family(n, m, big_m)?;
            let error = exact_inverse(&t)?
                .sub(&StructuredInverse::build(&t).to_dense())
                .sup_norm();
            let sq = ((n - 1) * (n - 1)) as f64;
            Ok(WorstCaseRow {
                n,
                m,
                big_m,
                error,
                scaled_error: sq * error,
                target: 1.0 / m,
            })
        })
        .collect()
}

/// Whitespace-separated reals.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid number {tok:?}")))
        })
        .collect()
}

/// Parses a matrix and right-hand side and solves with PCG.
pub fn run_solve(
    matrix_text: &str,
    rhs_text: &str,
    kind: PreconditionerKind,
    opts: SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let input = parse_matrix(matrix_text)?;
    let t = input.as_dyn();
    let b = parse_vector(rhs_text)?;
    if b.len() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            got: b.len(),
        });
    }
    let pre = Preconditioner::for_matrix(kind, t)?;
    pcg(t, &b, &pre, opts)
}

/// Parses a degree sequence and fits the β-model.
pub fn run_beta_fit(degrees_text: &str, opts: FitOptions) -> Result<(BetaParams, SolveReport)> {
    let d = parse_vector(degrees_text)?;
    if d.is_empty() {
        return Err(Error::Parse("empty degree sequence".into()));
    }
    fit_mle(&DegreeSequence::new(d)?, opts)
}

/// One value per line, then a summary line.
pub fn format_solution(x: &[f64], report: &SolveReport) -> String {
    let mut out = String::new();
    for v in x {
        let _ = writeln!(out, "{}", fmt_f64(*v));
    }
    let _ = writeln!(
        out,
        "# iterations {} converged {} residual {}",
        report.iterations,
        report.converged,
        fmt_f64(report.final_residual())
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_constant_row() {
        let rows = error_scan(&ScanConfig {
            n_list: vec![3],
            m: 1.0,
            big_m: 1.0,
            trials: 1,
            seed: 0,
        })
        .unwrap();
        let r = rows[0];
        assert!((r.max_error - 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(r.bound, 0.625);
        assert!((r.max_ratio - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn scan_is_deterministic_and_order_free() {
        let cfg = ScanConfig {
            n_list: vec![5, 12],
            m: 0.5,
            big_m: 2.0,
            trials: 4,
            seed: 77,
        };
        let a = rows_to_csv(&error_scan(&cfg).unwrap());
        assert_eq!(a, rows_to_csv(&error_scan(&cfg).unwrap()));
        let rev = error_scan(&ScanConfig {
            n_list: vec![12, 5],
            ..cfg.clone()
        })
        .unwrap();
        assert_eq!(rev[0], error_scan(&cfg).unwrap()[1]);
        assert!(a.starts_with(SCAN_HEADER));
    }

    #[test]
    fn scan_validation() {
        let base = ScanConfig {
            n_list: vec![5],
            m: 0.5,
            big_m: 2.0,
            trials: 1,
            seed: 0,
        };
        for bad in [
            ScanConfig {
                n_list: vec![2],
                ..base.clone()
            },
            ScanConfig {
                n_list: vec![501],
                ..base.clone()
            },
            ScanConfig {
                trials: 0,
                ..base.clone()
            },
            ScanConfig {
                m: 3.0,
                ..base.clone()
            },
        ] {
            assert!(error_scan(&bad).is_err());
        }
    }

    #[test]
    fn least_squares_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| -2.0 * x + 0.5).collect();
        let (s, c) = least_squares(&xs, &ys);
        assert!((s + 2.0).abs() < 1e-14 && (c - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rate_fit_dedupes() {
        let cfg = ScanConfig {
            n_list: vec![10, 10, 20, 40],
            m: 1.0,
            big_m: 1.0,
            trials: 1,
            seed: 0,
        };
        assert!(matches!(
            rate_fit(&cfg),
            Err(Error::InsufficientPoints { got: 3, .. })
        ));
        let fit = rate_fit(&ScanConfig {
            n_list: vec![10, 20, 20, 40, 80],
            ..cfg
        })
        .unwrap();
        assert_eq!(fit.rows.len(), 4);
    }

    #[test]
    fn worst_case_rows() {
        let rows = worst_case(&[10, 20], 1.0, 1.0).unwrap();
        assert!(rows.iter().all(|r| r.scaled_error > 0.0 && r.target == 1.0));
        assert!(worst_case(&[3], 1.0, 2.0).is_err());
        assert!(worst_case_to_csv(&rows).starts_with(WORST_CASE_HEADER));
    }

    #[test]
    fn solve_and_fit_drivers() {
        let (x, rep) = run_solve(
            "3\n1 1 1\n",
            "4 4 4",
            PreconditionerKind::DampedS,
            SolveOptions::default(),
        )
        .unwrap();
        assert!(rep.converged);
        assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(run_solve(
            "3\n1 1 1\n",
            "4 4",
            PreconditionerKind::None,
            SolveOptions::default()
        )
        .is_err());

        let (beta, _) = run_beta_fit("2 2 2 2 2", FitOptions::default()).unwrap();
        assert_eq!(beta.as_slice(), &[0.0; 5]);
        assert!(matches!(
            run_beta_fit("4 4 4 4 4", FitOptions::default()),
            Err(Error::BoundaryDegree { .. })
        ));
    }

    #[test]
    fn csv_floats_round_trip() {
        for v in [5.0 / 12.0, 1e-300, 0.1 + 0.2, std::f64::consts::PI] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
