//! Balanced and diagonally dominant symmetric matrices with positive
//! off-diagonal entries.
//!
//! Off-diagonal entries are the stored data; diagonals are derived from
//! them (plus a per-row slack for [`DominantMatrix`]), so the balance
//! condition `t_ii = Σ_{j≠i} t_ij` holds by construction.

use std::fmt::Write as _;

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Smallest dimension accepted for balanced and dominant matrices.
pub const MIN_DIM: usize = 3;

/// Smallest dimension accepted by [`worst_case_family`].
pub const MIN_WORST_CASE_DIM: usize = 4;

/// Number of strictly upper-triangular entries of an `n × n` matrix.
pub fn packed_len(n: usize) -> usize {
    n * (n - 1) / 2
}

#[inline]
fn packed_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Minimum and maximum of the entries that enter the error bounds.
///
/// For balanced matrices these are the smallest and largest off-diagonal
/// entries. For dominant matrices `upper` also covers the largest slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    /// `m`: smallest off-diagonal entry.
    pub lower: f64,
    /// `M`: largest off-diagonal entry (or slack, for dominant matrices).
    pub upper: f64,
}

/// Validated packed upper triangle, shared by both matrix types.
#[derive(Debug, Clone, PartialEq)]
struct OffDiagonals {
    n: usize,
    entries: Vec<f64>,
}

impl OffDiagonals {
    fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < MIN_DIM {
            return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
        }
        if entries.len() != packed_len(n) {
            return Err(Error::WrongEntryCount {
                expected: packed_len(n),
                got: entries.len(),
            });
        }
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let value = entries[k];
                if !value.is_finite() {
                    return Err(Error::NonfiniteEntry { i, j });
                }
                if value <= 0.0 {
                    return Err(Error::NonpositiveEntry { i, j, value });
                }
                k += 1;
            }
        }
        Ok(Self { n, entries })
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[packed_index(self.n, i, j)],
            std::cmp::Ordering::Greater => self.entries[packed_index(self.n, j, i)],
            std::cmp::Ordering::Equal => panic!("off-diagonal access on the diagonal ({i}, {i})"),
        }
    }

    fn row_sums(&self) -> Vec<f64> {
        let n = self.n;
        let mut sums = vec![0.0; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                sums[i] += self.entries[k];
                sums[j] += self.entries[k];
                k += 1;
            }
        }
        sums
    }

    fn min_max(&self) -> (f64, f64) {
        self.entries
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Common interface of [`BalancedMatrix`] and [`DominantMatrix`].
pub trait SymmetricPositive {
    fn dim(&self) -> usize;

    /// Off-diagonal entry `t_ij`, `i != j`.
    fn off_diag(&self, i: usize, j: usize) -> f64;

    /// Diagonal entries `t_ii`.
    fn diag(&self) -> &[f64];

    /// Packed strictly-upper entries in row-major `i < j` order.
    fn packed(&self) -> &[f64];

    /// Per-row diagonal excess, `None` for balanced matrices.
    fn slacks(&self) -> Option<&[f64]>;

    fn extremes(&self) -> Extremes;

    /// `t.. = Σ_{i≠j} t_ij`, the off-diagonal mass.
    fn total_mass(&self) -> f64 {
        2.0 * self.packed().iter().sum::<f64>()
    }

    /// Dense product `T·x`.
    fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut y: Vec<f64> = self.diag().iter().zip(x).map(|(d, xi)| d * xi).collect();
        let packed = self.packed();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let t = packed[k];
                y[i] += t * x[j];
                y[j] += t * x[i];
                k += 1;
            }
        }
        Ok(y)
    }

    fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut a = DenseMatrix::zeros(n);
        for (i, &d) in self.diag().iter().enumerate() {
            a[(i, i)] = d;
        }
        let packed = self.packed();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                a[(i, j)] = packed[k];
                a[(j, i)] = packed[k];
                k += 1;
            }
        }
        a
    }
}

/// Symmetric matrix with positive off-diagonals and `t_ii = Σ_{j≠i} t_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedMatrix {
    off: OffDiagonals,
    diag: Vec<f64>,
}

impl BalancedMatrix {
    /// Builds the matrix from its strictly-upper entries, row-major.
    pub fn from_off_diagonals(n: usize, entries: Vec<f64>) -> Result<Self> {
        let off = OffDiagonals::new(n, entries)?;
        let diag = off.row_sums();
        Ok(Self { off, diag })
    }

    /// Builds the matrix from a generator `f(i, j)`, called for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n < MIN_DIM {
            return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
        }
        let mut entries = Vec::with_capacity(packed_len(n));
        for i in 0..n {
            for j in i + 1..n {
                entries.push(f(i, j));
            }
        }
        Self::from_off_diagonals(n, entries)
    }

    /// Every off-diagonal entry equal to `value`.
    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| value)
    }
}

impl SymmetricPositive for BalancedMatrix {
    fn dim(&self) -> usize {
        self.off.n
    }

    fn off_diag(&self, i: usize, j: usize) -> f64 {
        self.off.get(i, j)
    }

    fn diag(&self) -> &[f64] {
        &self.diag
    }

    fn packed(&self) -> &[f64] {
        &self.off.entries
    }

    fn slacks(&self) -> Option<&[f64]> {
        None
    }

    fn extremes(&self) -> Extremes {
        let (lower, upper) = self.off.min_max();
        Extremes { lower, upper }
    }
}

/// Symmetric matrix with positive off-diagonals and
/// `t_ii = Σ_{j≠i} t_ij + Δ_i`, `Δ_i ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantMatrix {
    off: OffDiagonals,
    slack: Vec<f64>,
    diag: Vec<f64>,
}

impl DominantMatrix {
    pub fn from_dominant(n: usize, entries: Vec<f64>, slacks: Vec<f64>) -> Result<Self> {
        let off = OffDiagonals::new(n, entries)?;
        if slacks.len() != n {
            return Err(Error::WrongEntryCount {
                expected: n,
                got: slacks.len(),
            });
        }
        if let Some((row, &value)) = slacks
            .iter()
            .enumerate()
            .find(|(_, s)| !s.is_finite() || **s < 0.0)
        {
            return Err(Error::NegativeSlack { row, value });
        }
        let diag = off
            .row_sums()
            .into_iter()
            .zip(&slacks)
            .map(|(r, s)| r + s)
            .collect();
        Ok(Self {
            off,
            slack: slacks,
            diag,
        })
    }

    pub fn slack(&self) -> &[f64] {
        &self.slack
    }

    /// The balanced matrix with the same off-diagonals, if every slack is zero.
    pub fn to_balanced(&self) -> Option<BalancedMatrix> {
        if self.slack.iter().all(|&s| s == 0.0) {
            Some(BalancedMatrix {
                off: self.off.clone(),
                diag: self.diag.clone(),
            })
        } else {
            None
        }
    }
}

impl From<BalancedMatrix> for DominantMatrix {
    fn from(t: BalancedMatrix) -> Self {
        let n = t.off.n;
        Self {
            off: t.off,
            slack: vec![0.0; n],
            diag: t.diag,
        }
    }
}

impl SymmetricPositive for DominantMatrix {
    fn dim(&self) -> usize {
        self.off.n
    }

    fn off_diag(&self, i: usize, j: usize) -> f64 {
        self.off.get(i, j)
    }

    fn diag(&self) -> &[f64] {
        &self.diag
    }

    fn packed(&self) -> &[f64] {
        &self.off.entries
    }

    fn slacks(&self) -> Option<&[f64]> {
        Some(&self.slack)
    }

    fn extremes(&self) -> Extremes {
        let (lower, upper) = self.off.min_max();
        let max_slack = self.slack.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Extremes {
            lower,
            upper: upper.max(max_slack),
        }
    }
}

pub(crate) fn check_bounds(m: f64, big_m: f64) -> Result<()> {
    if m.is_finite() && big_m.is_finite() && m > 0.0 && m <= big_m {
        Ok(())
    } else {
        Err(Error::InvalidBounds { m, big_m })
    }
}

/// Balanced matrix with off-diagonals drawn independently and uniformly
/// from `[m, M]`.
pub fn random_balanced_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: f64,
    big_m: f64,
) -> Result<BalancedMatrix> {
    check_bounds(m, big_m)?;
    let dist = Uniform::new_inclusive(m, big_m);
    BalancedMatrix::from_fn(n, |_, _| dist.sample(rng))
}

/// [`random_balanced_with`] driven by a `ChaCha8Rng` seeded from `seed`.
pub fn random_balanced(n: usize, m: f64, big_m: f64, seed: u64) -> Result<BalancedMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_balanced_with(&mut rng, n, m, big_m)
}

/// The matrix showing the `1/(n-1)²` rate cannot be improved: every
/// off-diagonal is `m`, `t_ii = (n-1)M` for `i < n` and `t_nn = (n-1)m`.
///
/// Rows `1..n-1` exceed their off-diagonal sum by `(n-1)(M-m)`, so this is
/// a dominant matrix (balanced only when `M = m`).
pub fn worst_case_family(n: usize, m: f64, big_m: f64) -> Result<DominantMatrix> {
    if n < MIN_WORST_CASE_DIM {
        return Err(Error::DimensionTooSmall {
            n,
            min: MIN_WORST_CASE_DIM,
        });
    }
    check_bounds(m, big_m)?;
    let scale = (n - 1) as f64;
    let mut slacks = vec![scale * (big_m - m); n];
    slacks[n - 1] = 0.0;
    DominantMatrix::from_dominant(n, vec![m; packed_len(n)], slacks)
}

/// A matrix read from the text format.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixInput {
    Balanced(BalancedMatrix),
    Dominant(DominantMatrix),
}

impl MatrixInput {
    pub fn as_dyn(&self) -> &dyn SymmetricPositive {
        match self {
            MatrixInput::Balanced(t) => t,
            MatrixInput::Dominant(t) => t,
        }
    }
}

fn parse_f64(token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid number {token:?}")))
}

/// Parses the text format: `n`, then the `n(n-1)/2` strictly-upper entries
/// in row-major order, then optionally `n` slack values. Tokens are
/// whitespace separated.
pub fn parse_matrix(text: &str) -> Result<MatrixInput> {
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .parse()
        .map_err(|_| Error::Parse("first token must be the dimension n".into()))?;
    if n < MIN_DIM {
        return Err(Error::DimensionTooSmall { n, min: MIN_DIM });
    }
    let rest = tokens.map(parse_f64).collect::<Result<Vec<_>>>()?;
    let off_len = packed_len(n);
    if rest.len() == off_len {
        BalancedMatrix::from_off_diagonals(n, rest).map(MatrixInput::Balanced)
    } else if rest.len() == off_len + n {
        let mut entries = rest;
        let slacks = entries.split_off(off_len);
        DominantMatrix::from_dominant(n, entries, slacks).map(MatrixInput::Dominant)
    } else {
        Err(Error::Parse(format!(
            "expected {off_len} off-diagonal entries (or {} with slacks) for n = {n}, got {}",
            off_len + n,
            rest.len()
        )))
    }
}

/// Writes the text format; slacks are appended for dominant matrices.
pub fn format_matrix(t: &dyn SymmetricPositive) -> String {
    let n = t.dim();
    let mut out = format!("{n}\n");
    let packed = t.packed();
    let mut k = 0;
    for i in 0..n - 1 {
        let row: Vec<String> = packed[k..k + n - 1 - i]
            .iter()
            .map(|v| format!("{v:e}"))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
        k += n - 1 - i;
    }
    if let Some(slacks) = t.slacks() {
        let row: Vec<String> = slacks.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones3() -> BalancedMatrix {
        BalancedMatrix::constant(3, 1.0).unwrap()
    }

    #[test]
    fn balanced_diagonal_is_row_sum() {
        assert_eq!(ones3().diag(), &[2.0, 2.0, 2.0]);
        let t = BalancedMatrix::from_off_diagonals(3, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.diag(), &[3.0, 4.0, 5.0]);
        assert_eq!(t.off_diag(2, 1), 3.0);
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            BalancedMatrix::from_off_diagonals(3, vec![0.0, 1.0, 1.0]),
            Err(Error::NonpositiveEntry { i: 0, j: 1, .. })
        ));
        assert!(matches!(
            BalancedMatrix::from_off_diagonals(3, vec![1.0, f64::NAN, 1.0]),
            Err(Error::NonfiniteEntry { i: 0, j: 2 })
        ));
        assert!(matches!(
            BalancedMatrix::from_off_diagonals(2, vec![1.0]),
            Err(Error::DimensionTooSmall { n: 2, .. })
        ));
        assert!(matches!(
            BalancedMatrix::from_off_diagonals(3, vec![1.0, 1.0]),
            Err(Error::WrongEntryCount {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn dominant_construction() {
        let t = DominantMatrix::from_dominant(3, vec![1.0; 3], vec![0.0; 3]).unwrap();
        assert_eq!(t.diag(), ones3().diag());
        assert_eq!(t.to_balanced().unwrap(), ones3());

        let t = DominantMatrix::from_dominant(3, vec![1.0; 3], vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.diag(), &[3.0, 2.0, 2.0]);
        assert!(t.to_balanced().is_none());

        assert!(matches!(
            DominantMatrix::from_dominant(3, vec![1.0; 3], vec![-1.0, 0.0, 0.0]),
            Err(Error::NegativeSlack { row: 0, .. })
        ));
    }

    #[test]
    fn extremes_and_mass() {
        let t = BalancedMatrix::from_off_diagonals(3, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            t.extremes(),
            Extremes {
                lower: 1.0,
                upper: 3.0
            }
        );
        assert_eq!(t.total_mass(), 12.0);
        assert_eq!(ones3().total_mass(), 6.0);
        let c = BalancedMatrix::constant(6, 0.7).unwrap();
        assert_eq!(
            c.extremes(),
            Extremes {
                lower: 0.7,
                upper: 0.7
            }
        );

        let d = DominantMatrix::from_dominant(3, vec![1.0; 3], vec![5.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            d.extremes(),
            Extremes {
                lower: 1.0,
                upper: 5.0
            }
        );
        assert_eq!(d.total_mass(), 6.0);
    }

    #[test]
    fn matvec_examples() {
        let t = ones3();
        assert_eq!(t.matvec(&[1.0, 1.0, 1.0]).unwrap(), vec![4.0, 4.0, 4.0]);
        assert_eq!(t.matvec(&[0.0; 3]).unwrap(), vec![0.0; 3]);
        assert_eq!(t.matvec(&[1.0, 0.0, 0.0]).unwrap(), vec![2.0, 1.0, 1.0]);
        assert!(matches!(
            t.matvec(&[1.0; 4]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 4
            })
        ));
    }

    #[test]
    fn random_family() {
        let t = random_balanced(5, 2.0, 2.0, 17).unwrap();
        assert!(t.packed().iter().all(|&v| v == 2.0));
        assert_eq!(
            random_balanced(20, 0.5, 2.0, 9).unwrap(),
            random_balanced(20, 0.5, 2.0, 9).unwrap()
        );
        let e = random_balanced(30, 0.5, 2.0, 3).unwrap().extremes();
        assert!(0.5 <= e.lower && e.upper <= 2.0);
        assert!(random_balanced(5, 0.0, 1.0, 1).is_err());
        assert!(random_balanced(5, 2.0, 1.0, 1).is_err());
    }

    #[test]
    fn worst_case_layout() {
        let t = worst_case_family(4, 1.0, 1.0).unwrap();
        assert_eq!(
            t.to_balanced().unwrap(),
            BalancedMatrix::constant(4, 1.0).unwrap()
        );

        let t = worst_case_family(4, 1.0, 2.0).unwrap();
        assert_eq!(t.diag(), &[6.0, 6.0, 6.0, 3.0]);
        assert!(t.packed().iter().all(|&v| v == 1.0));
        assert_eq!(t.slack(), &[3.0, 3.0, 3.0, 0.0]);

        assert!(worst_case_family(3, 1.0, 2.0).is_err());
        assert!(worst_case_family(5, 2.0, 1.0).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let t = random_balanced(6, 0.5, 2.0, 1).unwrap();
        let back = parse_matrix(&format_matrix(&t)).unwrap();
        assert_eq!(back, MatrixInput::Balanced(t));

        let d = worst_case_family(5, 1.0, 3.0).unwrap();
        assert_eq!(
            parse_matrix(&format_matrix(&d)).unwrap(),
            MatrixInput::Dominant(d)
        );

        assert_eq!(
            parse_matrix("3\n1 1 1\n").unwrap(),
            MatrixInput::Balanced(ones3())
        );
        assert!(matches!(parse_matrix("3\n1 1"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("3\n1 x 1"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(""), Err(Error::Parse(_))));
    }
}
