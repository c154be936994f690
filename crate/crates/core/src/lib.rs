//! Structured approximate inverse for balanced symmetric matrices with
//! positive entries.
//!
//! A balanced matrix `T` has positive symmetric off-diagonals and each
//! diagonal entry equal to its off-diagonal row sum. Its inverse is
//! approximated by
//!
//! ```text
//! s_ij = δ_ij / t_ii - 1 / t..        t.. = Σ_{i≠j} t_ij
//! ```
//!
//! which needs O(n) storage and O(n) work to apply, and whose entrywise
//! error is certified to be O(1/(n-1)²).
//!
//! Modules:
//! - [`matrix`]: balanced and diagonally dominant matrix types, generators
//!   and the text format.
//! - [`approx`]: the structured inverse, its error bounds and the residual
//!   closed forms.
//! - [`dense`]: dense reference arithmetic (Cholesky inverse, sup norm,
//!   Sherman–Morrison closed form) used as ground truth.
//! - [`pcg`]: preconditioned conjugate gradients.
//! - [`beta`]: β-model Fisher information and moment fitting.
//! - [`bench`]: reproducible experiment drivers behind the `balinv` binary.

pub mod approx;
pub mod bench;
pub mod beta;
pub mod dense;
pub mod error;
pub mod matrix;
pub mod pcg;

pub use approx::{
    dominant_error_bound, error_bound, f_lambda, residual_v, residual_w, BoundReport,
    StructuredInverse,
};
pub use beta::{
    expected_degrees, fisher_info, fit_mle, sample_degrees, BetaParams, DegreeSequence, FitOptions,
};
pub use dense::{approx_error, exact_inverse, sherman_morrison_inverse, sup_norm, DenseMatrix};
pub use error::{Error, Result};
pub use matrix::{
    random_balanced, worst_case_family, BalancedMatrix, DominantMatrix, Extremes, SymmetricPositive,
};
pub use pcg::{pcg, Preconditioner, PreconditionerKind, SolveOptions, SolveReport};
