//! Preconditioned conjugate gradients with O(n) preconditioners.
//!
//! The structured inverse `S` is singular on balanced matrices
//! (`S·diag(T) = 0`), so it is used in the damped form
//!
//! ```text
//! S_θ = D⁻¹ - θ/t.. · 11ᵀ,   0 < θ < 1
//! ```
//!
//! which is positive definite whenever `θ·Σ t_ii < t..` (for balanced
//! matrices: any `θ < 1`). For balanced `T`, `S_θ·T·1 = 2(1-θ)·1`; the
//! default `θ = 1/2` makes the all-ones direction an exact eigenvector with
//! eigenvalue 1.

use std::str::FromStr;

use crate::approx::StructuredInverse;
use crate::error::{Error, Result};
use crate::matrix::SymmetricPositive;

/// Default damping for [`Preconditioner::DampedS`].
pub const DEFAULT_THETA: f64 = 0.5;

/// Iteration cap multiplier: `max_iter = 4n` unless overridden.
pub const DEFAULT_ITER_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionerKind {
    None,
    Jacobi,
    DampedS,
}

impl FromStr for PreconditionerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "jacobi" => Ok(Self::Jacobi),
            "damped-s" => Ok(Self::DampedS),
            other => Err(Error::Parse(format!(
                "unknown preconditioner {other:?} (expected none, jacobi or damped-s)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preconditioner {
    Identity,
    Jacobi {
        diag_recip: Vec<f64>,
    },
    DampedS {
        inverse: StructuredInverse,
        theta: f64,
    },
}

/// `x ↦ D⁻¹x - θ(Σx)/t..·1`.
pub fn make_damped(s: &StructuredInverse, theta: f64) -> Result<Preconditioner> {
    if !(theta > 0.0 && theta < 1.0) || theta * s.source_trace() >= s.mass() * (1.0 + 1e-12) {
        return Err(Error::InvalidDamping { theta });
    }
    Ok(Preconditioner::DampedS {
        inverse: s.clone(),
        theta,
    })
}

impl Preconditioner {
    /// Builds the preconditioner of the given kind for `t`, with
    /// [`DEFAULT_THETA`] for the damped form.
    pub fn for_matrix(kind: PreconditionerKind, t: &dyn SymmetricPositive) -> Result<Self> {
        match kind {
            PreconditionerKind::None => Ok(Self::Identity),
            PreconditionerKind::Jacobi => Ok(Self::Jacobi {
                diag_recip: t.diag().iter().map(|d| 1.0 / d).collect(),
            }),
            PreconditionerKind::DampedS => make_damped(&StructuredInverse::build(t), DEFAULT_THETA),
        }
    }

    pub fn kind(&self) -> PreconditionerKind {
        match self {
            Self::Identity => PreconditionerKind::None,
            Self::Jacobi { .. } => PreconditionerKind::Jacobi,
            Self::DampedS { .. } => PreconditionerKind::DampedS,
        }
    }

    /// Damping factor, `None` unless damped.
    pub fn theta(&self) -> Option<f64> {
        match self {
            Self::DampedS { theta, .. } => Some(*theta),
            _ => None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Identity => None,
            Self::Jacobi { diag_recip } => Some(diag_recip.len()),
            Self::DampedS { inverse, .. } => Some(inverse.dim()),
        }
    }

    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        match self {
            Self::Identity => r.to_vec(),
            Self::Jacobi { diag_recip } => r.iter().zip(diag_recip).map(|(a, b)| a * b).collect(),
            Self::DampedS { inverse, theta } => {
                let shift = theta * r.iter().sum::<f64>() / inverse.mass();
                r.iter()
                    .zip(inverse.diag_recip())
                    .map(|(a, b)| a * b - shift)
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Relative residual target `‖Tx - b‖₂ ≤ tol·‖b‖₂`.
    pub tol: f64,
    /// Defaults to `4n`.
    pub max_iter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Relative residual norms; entry 0 is the starting residual, entry `k`
    /// the residual after iteration `k`.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `T·x = b` from `x = 0`.
///
/// Hitting the iteration cap is not an error: the iterate with the smallest
/// residual is returned with `converged = false`.
pub fn pcg(
    t: &dyn SymmetricPositive,
    b: &[f64],
    pre: &Preconditioner,
    opts: SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = t.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if let Some(pn) = pre.dim() {
        if pn != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: pn,
            });
        }
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidTolerance(opts.tol));
    }
    let max_iter = opts.max_iter.unwrap_or(DEFAULT_ITER_FACTOR * n);

    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((
            x,
            SolveReport {
                iterations: 0,
                residuals: vec![0.0],
                converged: true,
            },
        ));
    }

    let mut r = b.to_vec();
    let mut z = pre.apply(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut residuals = vec![1.0];
    let mut best = (1.0, x.clone());

    for iteration in 1..=max_iter {
        let tp = t.matvec(&p)?;
        let curvature = dot(&p, &tp);
        if curvature.is_nan() || curvature <= 0.0 {
            return Err(Error::Breakdown {
                iteration,
                curvature,
            });
        }
        let alpha = rz / curvature;
        for ((xi, ri), (pi, tpi)) in x.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(&tp)) {
            *xi += alpha * pi;
            *ri -= alpha * tpi;
        }
        let rel = norm(&r) / b_norm;
        residuals.push(rel);
        if rel <= opts.tol {
            return Ok((
                x,
                SolveReport {
                    iterations: iteration,
                    residuals,
                    converged: true,
                },
            ));
        }
        if rel < best.0 {
            best = (rel, x.clone());
        }
        z = pre.apply(&r);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }

    Ok((
        best.1,
        SolveReport {
            iterations: max_iter,
            residuals,
            converged: false,
        },
    ))
}
