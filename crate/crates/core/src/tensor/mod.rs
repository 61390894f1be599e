//! Dense and circulant tensor representations.
//!
//! A tensor of order `m` and dimension `n` holds `n^m` real entries
//! `a[j1..jm]`. Public accessors take 1-based index tuples; the `at`
//! accessor on [`Tensor`] is 0-based and unchecked, for inner loops.

mod circulant;
mod dense;
pub mod index;
mod ops;

use num_complex::Complex64;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub use circulant::CirculantTensor;
pub use dense::DenseTensor;
pub use ops::{
    diagonal_part, is_circulant, is_toeplitz, matrix_product, symmetrize, symmetrize_circulant,
    ShiftPermutation,
};

/// Default ceiling on the number of entries a dense tensor may hold.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Complex vector used for eigenvector work.
pub type ComplexVector = Vec<Complex64>;

/// Field over which multilinear forms are evaluated: `f64` or `Complex64`.
pub trait Scalar:
    Copy + Zero + One + Add<Output = Self> + Mul<Output = Self> + Sub<Output = Self> + From<f64>
{
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Read access shared by all tensor representations.
pub trait Tensor {
    fn order(&self) -> usize;
    fn dim(&self) -> usize;

    /// Entry at a 0-based index tuple. The caller guarantees range.
    fn at(&self, idx: &[usize]) -> f64;

    /// Entry at a 1-based index tuple.
    fn entry(&self, idx: &[usize]) -> Result<f64> {
        let zero = index::to_zero_based(idx, self.order(), self.dim())?;
        Ok(self.at(&zero))
    }

    /// `A x^m`, the homogeneous form.
    fn apply_full(&self, x: &[f64]) -> Result<f64> {
        check_len(x.len(), self.dim())?;
        let mut total = 0.0;
        index::for_each_index(self.order(), self.dim(), |idx| {
            let a = self.at(idx);
            if a != 0.0 {
                total += a * idx.iter().map(|&j| x[j]).product::<f64>();
            }
        });
        Ok(total)
    }

    /// `A x^{m-1}`: the vector whose `j`-th component contracts every slot
    /// but the first with `x`.
    fn apply_partial<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>>
    where
        Self: Sized,
    {
        check_len(x.len(), self.dim())?;
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        index::for_each_index(self.order(), n, |idx| {
            let a = self.at(idx);
            if a != 0.0 {
                let prod = idx[1..].iter().fold(T::one(), |acc, &j| acc * x[j]);
                out[idx[0]] = out[idx[0]] + T::from(a) * prod;
            }
        });
        Ok(out)
    }

    /// Dense copy, refusing when `n^m` exceeds `budget`.
    fn to_dense(&self, budget: usize) -> Result<DenseTensor> {
        let (m, n) = (self.order(), self.dim());
        match index::checked_len(m, n) {
            Some(len) if len <= budget => Ok(DenseTensor::from_fn(m, n, |idx| self.at(idx))),
            _ => Err(Error::BudgetExceeded {
                needed: index::wide_len(m, n),
                budget,
            }),
        }
    }

    /// Sum of absolute values of all entries.
    fn abs_sum(&self) -> f64 {
        let mut s = 0.0;
        index::for_each_index(self.order(), self.dim(), |idx| s += self.at(idx).abs());
        s
    }
}

/// Relative tolerance for sign decisions on computed sums. A value built
/// from terms of total magnitude `scale` is treated as zero when it lies
/// within `ROUNDING_TOL * scale` of it.
pub const ROUNDING_TOL: f64 = 1e-12;

/// `v >= 0` up to rounding.
pub(crate) fn nonneg(v: f64, scale: f64) -> bool {
    v >= -ROUNDING_TOL * scale
}

/// `v > 0` beyond rounding.
pub(crate) fn positive(v: f64, scale: f64) -> bool {
    v > ROUNDING_TOL * scale
}

pub(crate) fn check_len(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `x^{[p]}`, componentwise power.
pub fn componentwise_pow<T: Scalar>(x: &[T], p: usize) -> Vec<T> {
    x.iter()
        .map(|&v| (0..p).fold(T::one(), |acc, _| acc * v))
        .collect()
}

/// The unit vector `1_j` (1-based `j`).
pub fn unit_vector(n: usize, j: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[j - 1] = 1.0;
    v
}

/// The alternating sign vector `(1, -1, 1, -1, ...)`.
pub fn alternating_ones(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}
