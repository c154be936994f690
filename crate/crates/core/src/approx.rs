//! The structured approximate inverse `S` and its error certificates.
//!
//! For a matrix `T` with diagonal `t_ii` and off-diagonal mass
//! `t.. = Σ_{i≠j} t_ij`,
//!
//! ```text
//! s_ij = δ_ij / t_ii - 1 / t..
//! ```
//!
//! `S` is a diagonal matrix minus a constant, so it is stored as `n`
//! reciprocals plus one scalar and applied in O(n).
//!
//! For balanced `T`, `Σ_k t_kk = t..`, hence `S·diag(T) = 0`: `S` is
//! singular, positive semidefinite, and its kernel is spanned by the
//! diagonal of `T`.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::matrix::{check_bounds, BalancedMatrix, SymmetricPositive, MIN_DIM};

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredInverse {
    diag_recip: Vec<f64>,
    mass: f64,
    trace: f64,
}

impl StructuredInverse {
    /// Builds `S` for `T`. `t..` is always the off-diagonal mass, also for
    /// dominant matrices.
    pub fn build(t: &dyn SymmetricPositive) -> Self {
        let diag = t.diag();
        Self {
            diag_recip: diag.iter().map(|d| 1.0 / d).collect(),
            mass: t.total_mass(),
            trace: diag.iter().sum(),
        }
    }

    pub fn dim(&self) -> usize {
        self.diag_recip.len()
    }

    /// `1 / t_ii`.
    pub fn diag_recip(&self) -> &[f64] {
        &self.diag_recip
    }

    /// `t..`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `Σ t_ii` of the source matrix; equals [`mass`](Self::mass) when the
    /// source is balanced.
    pub fn source_trace(&self) -> f64 {
        self.trace
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let d = if i == j { self.diag_recip[i] } else { 0.0 };
        d - 1.0 / self.mass
    }

    /// `y_i = x_i / t_ii - (Σ_k x_k) / t..`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let shift = x.iter().sum::<f64>() / self.mass;
        Ok(x.iter()
            .zip(&self.diag_recip)
            .map(|(xi, r)| xi * r - shift)
            .collect())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.dim(), |i, j| self.entry(i, j))
    }
}

/// The balanced-case error certificate for `‖T⁻¹ - S‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub m: f64,
    pub big_m: f64,
    pub n: usize,
    /// `C(m, M) = (M/m²)·(nM + (n-2)m) / (2(n-2)m)`; depends on `n` too.
    pub c_term: f64,
    /// `a = M / (m²(n-1)²)`, the bound on the residual `W` and its row
    /// differences.
    pub a: f64,
    /// `C(m, M)/(n-1)² + 1/(2m(n-1)²)`.
    pub bound: f64,
}

/// Sup-norm error bound for balanced matrices with off-diagonals in `[m, M]`.
pub fn error_bound(m: f64, big_m: f64, n: usize) -> Result<BoundReport> {
    if n < MIN_DIM {
        return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
    }
    check_bounds(m, big_m)?;
    let nf = n as f64;
    let sq = (nf - 1.0) * (nf - 1.0);
    let c_term = big_m / (m * m) * (nf * big_m + (nf - 2.0) * m) / (2.0 * (nf - 2.0) * m);
    Ok(BoundReport {
        m,
        big_m,
        n,
        c_term,
        a: big_m / (m * m * sq),
        bound: c_term / sq + 1.0 / (2.0 * m * sq),
    })
}

/// The bracketed contraction margin of the dominant-case bound,
/// `2(n-2)m/(nM + (n-2)m) - M/(m(n-1)) - (n-2)Mm/(((n-2)m + M)((n-2)m + 2M))`.
pub fn dominant_bracket(m: f64, big_m: f64, n: usize) -> f64 {
    let nf = n as f64;
    let k = (nf - 2.0) * m;
    2.0 * k / (nf * big_m + k)
        - big_m / (m * (nf - 1.0))
        - k * big_m / ((k + big_m) * (k + 2.0 * big_m))
}

/// Sup-norm error bound for dominant matrices; `M` must already include the
/// largest slack. Only valid where the bracket is positive.
pub fn dominant_error_bound(m: f64, big_m: f64, n: usize) -> Result<f64> {
    if n < MIN_DIM {
        return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
    }
    check_bounds(m, big_m)?;
    let bracket = dominant_bracket(m, big_m, n);
    if bracket.is_nan() || bracket <= 0.0 {
        return Err(Error::BoundInapplicable { bracket });
    }
    let nf = n as f64;
    let scale = big_m / (m * m) + 4.0 * big_m / (m * m * nf);
    Ok(scale / (bracket * (nf - 1.0) * (nf - 1.0)) + 1.0 / (m * nf * (nf - 1.0)))
}

/// Closed form of `V = I - T·S`:
/// `v_ij = (δ_ij - 1)·t_ij/t_jj + 2 t_ii / t..`.
pub fn residual_v(t: &BalancedMatrix) -> DenseMatrix {
    let diag = t.diag();
    let mass = t.total_mass();
    DenseMatrix::from_fn(t.dim(), |i, j| {
        let row = 2.0 * diag[i] / mass;
        if i == j {
            row
        } else {
            row - t.off_diag(i, j) / diag[j]
        }
    })
}

/// Closed form of `W = S·V`:
/// `w_ij = (δ_ij - 1)·t_ij/(t_ii t_jj) + 1/t..`.
pub fn residual_w(t: &BalancedMatrix) -> DenseMatrix {
    let diag = t.diag();
    let inv_mass = 1.0 / t.total_mass();
    DenseMatrix::from_fn(t.dim(), |i, j| {
        if i == j {
            inv_mass
        } else {
            inv_mass - t.off_diag(i, j) / (diag[i] * diag[j])
        }
    })
}

/// `f(λ) = λM/(λM + (n-1-λ)m) - (λ-1)m/((λ-1)m + (n-λ)M)` on `[1, n-1]`.
///
/// Concave when `M > m`, maximal at `λ = n/2`, constant `1/(n-1)` when
/// `M = m`.
pub fn f_lambda(lambda: f64, n: usize, m: f64, big_m: f64) -> Result<f64> {
    if n < MIN_DIM {
        return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
    }
    check_bounds(m, big_m)?;
    let nf = n as f64;
    if !(1.0..=nf - 1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange {
            lambda,
            upper: nf - 1.0,
        });
    }
    let first = lambda * big_m / (lambda * big_m + (nf - 1.0 - lambda) * m);
    let second = (lambda - 1.0) * m / ((lambda - 1.0) * m + (nf - lambda) * big_m);
    Ok(first - second)
}
