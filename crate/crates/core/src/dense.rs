//! Dense reference arithmetic.
//!
//! Everything here is O(n²) storage and up to O(n³) work, and is used as
//! ground truth for the O(n) structured paths. Dimensions are capped at
//! [`ORACLE_MAX_DIM`].

use std::ops::{Index, IndexMut};

use crate::approx::{dominant_error_bound, error_bound, StructuredInverse};
use crate::error::{Error, Result};
use crate::matrix::{check_bounds, SymmetricPositive, MIN_WORST_CASE_DIM};

/// Largest dimension the dense oracles accept.
pub const ORACLE_MAX_DIM: usize = 500;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n);
        for i in 0..n {
            a[(i, i)] = 1.0;
        }
        a
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, rhs.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, rhs.n, "sub dimension mismatch");
        DenseMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, rhs.n, "add dimension mismatch");
        DenseMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// `(A + Aᵀ) / 2`.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }

    /// Maximum absolute entry.
    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Lower-triangular Cholesky factor; fails on a nonpositive pivot.
    pub fn cholesky(&self) -> Result<Cholesky> {
        let n = self.n;
        let mut l = DenseMatrix::zeros(n);
        for j in 0..n {
            let mut pivot = self[(j, j)];
            for k in 0..j {
                pivot -= l[(j, k)] * l[(j, k)];
            }
            if pivot.is_nan() || pivot <= 0.0 {
                return Err(Error::NotPositiveDefinite { row: j, pivot });
            }
            let ljj = pivot.sqrt();
            l[(j, j)] = ljj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Cholesky { l })
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// `A = L·Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DenseMatrix,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.n;
        assert_eq!(b.len(), n, "solve dimension mismatch");
        let mut y = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.l[(i, k)] * y[k]).sum();
            y[i] = (y[i] - s) / self.l[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.l[(k, i)] * y[k]).sum();
            y[i] = (y[i] - s) / self.l[(i, i)];
        }
        y
    }

    /// Symmetrized inverse of the factored matrix.
    pub fn inverse(&self) -> DenseMatrix {
        let n = self.l.n;
        let mut inv = DenseMatrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv.symmetrize();
        inv
    }
}

/// Dense `T⁻¹` via Cholesky, symmetrized.
pub fn exact_inverse(t: &dyn SymmetricPositive) -> Result<DenseMatrix> {
    let n = t.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    Ok(t.to_dense().cholesky()?.inverse())
}

pub fn sup_norm(a: &DenseMatrix) -> f64 {
    a.sup_norm()
}

/// Outcome of comparing the closed form against dense inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossCheck {
    Agrees { max_rel_diff: f64 },
    Discrepancy { max_rel_diff: f64 },
}

/// Relative tolerance for [`CrossCheck::Agrees`].
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ShermanMorrison {
    pub inverse: DenseMatrix,
    pub check: CrossCheck,
}

/// Closed-form inverse of [`worst_case_family`](crate::matrix::worst_case_family)
/// from the rank-one update `T = D' + m·11ᵀ`, with
/// `D' = diag((n-1)M - m, …, (n-1)M - m, (n-2)m)`.
///
/// The result carries a cross-check against [`exact_inverse`] of the same
/// family (skipped, and reported as agreeing with difference 0, only when
/// `n` exceeds the oracle ceiling).
pub fn sherman_morrison_inverse(n: usize, m: f64, big_m: f64) -> Result<ShermanMorrison> {
    if n < MIN_WORST_CASE_DIM {
        return Err(Error::DimensionTooSmall {
            n,
            min: MIN_WORST_CASE_DIM,
        });
    }
    check_bounds(m, big_m)?;
    let nf = n as f64;
    let heavy = (nf - 1.0) * big_m - m;
    let light = (nf - 2.0) * m;
    // common factor (1 + (n-1)m/((n-1)M - m) + 1/(n-2))⁻¹
    let k_inv = 1.0 / (1.0 + (nf - 1.0) * m / heavy + 1.0 / (nf - 2.0));
    let last = n - 1;
    let inverse = DenseMatrix::from_fn(n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        match (i == last, j == last) {
            (false, false) => delta / heavy - m / (heavy * heavy) * k_inv,
            (true, true) => 1.0 / light - k_inv / ((nf - 2.0) * (nf - 2.0) * m),
            _ => -k_inv / ((nf - 2.0) * heavy),
        }
    });

    let check = if n <= ORACLE_MAX_DIM {
        let dense = exact_inverse(&crate::matrix::worst_case_family(n, m, big_m)?)?;
        let max_rel_diff = inverse.sub(&dense).sup_norm() / dense.sup_norm();
        if max_rel_diff <= CROSS_CHECK_TOL {
            CrossCheck::Agrees { max_rel_diff }
        } else {
            CrossCheck::Discrepancy { max_rel_diff }
        }
    } else {
        CrossCheck::Agrees { max_rel_diff: 0.0 }
    };
    Ok(ShermanMorrison { inverse, check })
}

/// Observed error of `S` against the certified bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxError {
    pub error: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// `‖T⁻¹ - S‖` against the balanced bound, or the dominant-extension bound
/// when some slack is positive.
pub fn approx_error(t: &dyn SymmetricPositive) -> Result<ApproxError> {
    let inv = exact_inverse(t)?;
    let s = StructuredInverse::build(t).to_dense();
    let error = inv.sub(&s).sup_norm();
    let ext = t.extremes();
    let has_slack = t.slacks().is_some_and(|s| s.iter().any(|&v| v > 0.0));
    let bound = if has_slack {
        dominant_error_bound(ext.lower, ext.upper, t.dim())?
    } else {
        error_bound(ext.lower, ext.upper, t.dim())?.bound
    };
    Ok(ApproxError {
        error,
        bound,
        ratio: error / bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{random_balanced, worst_case_family, BalancedMatrix};

    #[test]
    fn inverse_of_ones3() {
        let t = BalancedMatrix::constant(3, 1.0).unwrap();
        let inv = exact_inverse(&t).unwrap();
        let want = DenseMatrix::from_fn(3, |i, j| if i == j { 0.75 } else { -0.25 });
        assert!(inv.sub(&want).sup_norm() < 1e-15);
    }

    #[test]
    fn inverse_residual_and_positive_diagonal() {
        for seed in 0..5 {
            let t = random_balanced(40, 0.1, 10.0, seed).unwrap();
            let inv = exact_inverse(&t).unwrap();
            let resid = t.to_dense().matmul(&inv).sub(&DenseMatrix::identity(40));
            assert!(resid.sup_norm() <= 1e-10);
            assert!((0..40).all(|i| inv[(i, i)] > 0.0));
            assert_eq!(inv, inv.transpose());
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = DenseMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(matches!(
            a.cholesky(),
            Err(Error::NotPositiveDefinite { row: 1, .. })
        ));
    }

    #[test]
    fn oracle_ceiling() {
        let t = BalancedMatrix::constant(ORACLE_MAX_DIM + 1, 1.0).unwrap();
        assert!(matches!(
            exact_inverse(&t),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(sup_norm(&DenseMatrix::zeros(4)), 0.0);
        let t = BalancedMatrix::constant(3, 1.0).unwrap();
        let f = exact_inverse(&t)
            .unwrap()
            .sub(&StructuredInverse::build(&t).to_dense());
        assert!((sup_norm(&f) - 5.0 / 12.0).abs() < 1e-15);
        let a = random_balanced(5, 1.0, 2.0, 1).unwrap().to_dense();
        let b = DenseMatrix::identity(5);
        assert_eq!(sup_norm(&a.sub(&b)), sup_norm(&b.sub(&a)));
    }

    #[test]
    fn sherman_morrison_matches_dense() {
        for &(n, m, big_m) in &[(10, 1.0, 2.0), (4, 1.0, 1.0), (37, 0.3, 5.0)] {
            let sm = sherman_morrison_inverse(n, m, big_m).unwrap();
            assert!(
                matches!(sm.check, CrossCheck::Agrees { .. }),
                "{n}: {:?}",
                sm.check
            );
            assert!(sm.inverse.sub(&sm.inverse.transpose()).sup_norm() < 1e-16);
        }
        assert!(sherman_morrison_inverse(3, 1.0, 2.0).is_err());
        assert!(sherman_morrison_inverse(5, 2.0, 1.0).is_err());
    }

    #[test]
    fn approx_error_ones3() {
        let t = BalancedMatrix::constant(3, 1.0).unwrap();
        let r = approx_error(&t).unwrap();
        assert!((r.error - 5.0 / 12.0).abs() < 1e-15);
        assert!((r.bound - 0.625).abs() < 1e-15);
        assert!((r.ratio - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn approx_error_on_dominant_uses_extension_bound() {
        let t = worst_case_family(100, 1.0, 1.0).unwrap();
        // zero slack everywhere: balanced bound
        let r = approx_error(&t).unwrap();
        assert!((r.bound - error_bound(1.0, 1.0, 100).unwrap().bound).abs() < 1e-18);
        // small n with slack: extension bound inapplicable
        let t = worst_case_family(5, 1.0, 3.0).unwrap();
        assert!(matches!(
            approx_error(&t),
            Err(Error::BoundInapplicable { .. })
        ));
    }
}
