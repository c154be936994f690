//! β-model for undirected random graphs.
//!
//! Edge `{i, j}` is present independently with probability
//! `p_ij = σ(β_i + β_j)`, `σ` the logistic function. The Jacobian of the
//! expected degrees with respect to β is the Fisher information, a
//! balanced matrix with off-diagonals `p_ij(1 - p_ij)`, so the structured
//! inverse gives an O(n) quasi-Newton step for the moment equations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::StructuredInverse;
use crate::error::{Error, Result};
use crate::matrix::{BalancedMatrix, MIN_DIM};
use crate::pcg::{make_damped, SolveReport, DEFAULT_THETA};

#[derive(Debug, Clone, PartialEq)]
pub struct BetaParams(Vec<f64>);

impl BetaParams {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if let Some(i) = beta.iter().position(|b| !b.is_finite()) {
            return Err(Error::NonfiniteEntry { i, j: i });
        }
        Ok(Self(beta))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Observed (or expected) degrees, `0 ≤ d_i ≤ n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence(Vec<f64>);

impl DegreeSequence {
    /// Validates the range; an integer-valued sequence must also have an
    /// even sum.
    pub fn new(d: Vec<f64>) -> Result<Self> {
        let max = d.len().saturating_sub(1) as f64;
        for (node, &value) in d.iter().enumerate() {
            if !(value.is_finite() && (0.0..=max).contains(&value)) {
                return Err(Error::DegreeOutOfRange { node, value, max });
            }
        }
        if d.iter().all(|v| v.fract() == 0.0) {
            let sum = d.iter().sum::<f64>() as u64;
            if sum % 2 == 1 {
                return Err(Error::OddDegreeSum(sum));
            }
        }
        Ok(Self(d))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// `σ(s)(1 - σ(s))`, floored at the smallest normal float.
fn logistic_variance(s: f64) -> f64 {
    let e = (-s.abs()).exp();
    (e / ((1.0 + e) * (1.0 + e))).max(f64::MIN_POSITIVE)
}

/// Fisher information of the β-model at `beta`.
pub fn fisher_info(beta: &BetaParams) -> Result<BalancedMatrix> {
    let b = beta.as_slice();
    BalancedMatrix::from_fn(b.len(), |i, j| logistic_variance(b[i] + b[j]))
}

/// `E_i = Σ_{j≠i} p_ij`.
pub fn expected_degrees(beta: &BetaParams) -> Vec<f64> {
    let b = beta.as_slice();
    let n = b.len();
    let mut e = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let p = logistic(b[i] + b[j]);
            e[i] += p;
            e[j] += p;
        }
    }
    e
}

/// Degrees of one graph drawn from the model, reproducible per seed.
pub fn sample_degrees(beta: &BetaParams, seed: u64) -> DegreeSequence {
    let b = beta.as_slice();
    let n = b.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(logistic(b[i] + b[j])) {
                d[i] += 1.0;
                d[j] += 1.0;
            }
        }
    }
    DegreeSequence(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Target for `max_i |E_i(β) - d_i|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Damping of the structured inverse used as the step operator.
    pub theta: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
            theta: DEFAULT_THETA,
        }
    }
}

/// Solves the moment equations `E(β) = d` by the quasi-Newton iteration
/// `β ← β - S_θ(β)·(E(β) - d)`, where `S_θ(β)` is the damped structured
/// inverse of the Fisher information at β.
///
/// Starts from `β_i = ½·log(d_i / (n-1-d_i))`, which is exact when all
/// degrees are equal. The report's residuals are sup-norm moment residuals.
pub fn fit_mle(d: &DegreeSequence, opts: FitOptions) -> Result<(BetaParams, SolveReport)> {
    let n = d.len();
    if n < MIN_DIM {
        return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidTolerance(opts.tol));
    }
    let top = (n - 1) as f64;
    if let Some((node, &degree)) = d
        .as_slice()
        .iter()
        .enumerate()
        .find(|(_, &v)| v <= 0.0 || v >= top)
    {
        return Err(Error::BoundaryDegree { node, degree });
    }

    let target = d.as_slice();
    let mut beta = BetaParams(target.iter().map(|&v| 0.5 * (v / (top - v)).ln()).collect());
    let mut residuals = Vec::new();
    for iteration in 0..=opts.max_iter {
        let r: Vec<f64> = expected_degrees(&beta)
            .iter()
            .zip(target)
            .map(|(e, t)| e - t)
            .collect();
        let sup = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        residuals.push(sup);
        if sup <= opts.tol {
            return Ok((
                beta,
                SolveReport {
                    iterations: iteration,
                    residuals,
                    converged: true,
                },
            ));
        }
        if iteration == opts.max_iter {
            break;
        }
        let step =
            make_damped(&StructuredInverse::build(&fisher_info(&beta)?), opts.theta)?.apply(&r);
        beta.0.iter_mut().zip(step).for_each(|(b, s)| *b -= s);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: residuals.last().copied().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::exact_inverse;
    use crate::matrix::SymmetricPositive;

    #[test]
    fn fisher_at_zero() {
        let t = fisher_info(&BetaParams::zeros(3)).unwrap();
        assert!(t.packed().iter().all(|&v| v == 0.25));
        assert_eq!(t.diag(), &[0.5, 0.5, 0.5]);
        let e = fisher_info(&BetaParams::zeros(40)).unwrap().extremes();
        assert_eq!((e.lower, e.upper), (0.25, 0.25));
    }

    #[test]
    fn fisher_lower_bound_on_box() {
        let l: f64 = 1.5;
        let beta =
            BetaParams::new((0..20).map(|i| l * ((i as f64) * 0.9).sin()).collect()).unwrap();
        let p = logistic(2.0 * l);
        let e = fisher_info(&beta).unwrap().extremes();
        assert!(e.lower >= p * (1.0 - p) * (1.0 - 1e-12));
    }

    #[test]
    fn fisher_survives_extreme_beta() {
        let beta = BetaParams::new(vec![800.0, 800.0, -900.0, 0.0]).unwrap();
        assert!(fisher_info(&beta).is_ok());
        assert!(BetaParams::new(vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn expected_degree_examples() {
        assert_eq!(expected_degrees(&BetaParams::zeros(5)), vec![2.0; 5]);
        let big = expected_degrees(&BetaParams::new(vec![40.0; 6]).unwrap());
        assert!(big.iter().all(|&v| (v - 5.0).abs() < 1e-12));

        let beta = vec![0.3, -1.0, 0.8, 0.1];
        let perm = [2usize, 0, 3, 1];
        let e = expected_degrees(&BetaParams::new(beta.clone()).unwrap());
        let permuted: Vec<f64> = perm.iter().map(|&k| beta[k]).collect();
        let ep = expected_degrees(&BetaParams::new(permuted).unwrap());
        for (slot, &k) in perm.iter().enumerate() {
            assert!((ep[slot] - e[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn sampling_contracts() {
        let none = sample_degrees(&BetaParams::new(vec![-20.0; 8]).unwrap(), 1);
        assert!(none.as_slice().iter().all(|&v| v == 0.0));
        let beta = BetaParams::new(vec![0.4, -0.2, 0.0, 1.0, -1.0, 0.3]).unwrap();
        for seed in 0..50 {
            let d = sample_degrees(&beta, seed);
            assert_eq!(d.as_slice().iter().sum::<f64>() as u64 % 2, 0);
            assert_eq!(d, sample_degrees(&beta, seed));
        }
    }

    #[test]
    fn sample_mean_matches_expectation() {
        let beta = BetaParams::new(vec![0.4, -0.2, 0.0, 1.0, -1.0, 0.3]).unwrap();
        let n = beta.len();
        let trials = 10_000;
        let mut sum = vec![0.0; n];
        let mut sum_sq = vec![0.0; n];
        for seed in 0..trials {
            for (i, v) in sample_degrees(&beta, seed).as_slice().iter().enumerate() {
                sum[i] += v;
                sum_sq[i] += v * v;
            }
        }
        let expected = expected_degrees(&beta);
        let t = trials as f64;
        for i in 0..n {
            let mean = sum[i] / t;
            let var = sum_sq[i] / t - mean * mean;
            let se = (var / t).sqrt();
            assert!((mean - expected[i]).abs() <= 3.0 * se, "node {i}");
        }
    }

    #[test]
    fn degree_validation() {
        assert!(DegreeSequence::new(vec![1.0, 2.0, 1.0]).is_ok());
        assert!(matches!(
            DegreeSequence::new(vec![1.0, 1.0, 1.0]),
            Err(Error::OddDegreeSum(3))
        ));
        assert!(matches!(
            DegreeSequence::new(vec![3.0, 1.0, 0.0]),
            Err(Error::DegreeOutOfRange { node: 0, .. })
        ));
        assert!(DegreeSequence::new(vec![1.5, 1.0, 0.5]).is_ok());
    }

    #[test]
    fn symmetric_fixed_point() {
        let d = DegreeSequence::new(vec![2.0; 5]).unwrap();
        let (beta, rep) = fit_mle(&d, FitOptions::default()).unwrap();
        assert_eq!(beta.as_slice(), &[0.0; 5]);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn boundary_degrees_rejected() {
        let d = DegreeSequence::new(vec![4.0; 5]).unwrap();
        assert!(matches!(
            fit_mle(&d, FitOptions::default()),
            Err(Error::BoundaryDegree { .. })
        ));
        let d = DegreeSequence::new(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            fit_mle(&d, FitOptions::default()),
            Err(Error::BoundaryDegree { node: 0, .. })
        ));
    }

    #[test]
    fn non_convergence_reported() {
        let beta = BetaParams::new(vec![0.9, -0.7, 0.2, 0.5, -0.3]).unwrap();
        let d = DegreeSequence::new(expected_degrees(&beta)).unwrap();
        let opts = FitOptions {
            max_iter: 1,
            tol: 1e-14,
            ..FitOptions::default()
        };
        assert!(matches!(
            fit_mle(&d, opts),
            Err(Error::NoConvergence { iterations: 1, .. })
        ));
    }

    /// Newton iteration with the dense inverse Fisher matrix.
    fn exact_newton(d: &[f64]) -> Vec<f64> {
        let mut beta = BetaParams::zeros(d.len());
        for _ in 0..100 {
            let r: Vec<f64> = expected_degrees(&beta)
                .iter()
                .zip(d)
                .map(|(e, t)| e - t)
                .collect();
            let inv = exact_inverse(&fisher_info(&beta).unwrap()).unwrap();
            let step = inv.matvec(&r);
            beta = BetaParams::new(
                beta.as_slice()
                    .iter()
                    .zip(step)
                    .map(|(b, s)| b - s)
                    .collect(),
            )
            .unwrap();
        }
        beta.into_inner()
    }

    #[test]
    fn quasi_newton_matches_exact_newton_n3() {
        let truth = BetaParams::new(vec![0.5, -0.5, 0.0]).unwrap();
        let d = expected_degrees(&truth);
        let newton = exact_newton(&d);
        let (fit, rep) = fit_mle(&DegreeSequence::new(d).unwrap(), FitOptions::default()).unwrap();
        assert!(rep.converged);
        for (a, b) in fit.as_slice().iter().zip(&newton) {
            assert!((a - b).abs() < 1e-6);
        }
        for (a, b) in newton.iter().zip(truth.as_slice()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
