use itertools::Itertools;
use nalgebra::DMatrix;

use super::index;
use super::{CirculantTensor, DenseTensor, Tensor};
use crate::error::{Error, Result};

/// The cyclic permutation matrix with ones on the superdiagonal and at
/// position `(n, 1)`. It maps `1_j` to `1_{j-1}` (cyclically).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftPermutation {
    dim: usize,
}

impl ShiftPermutation {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |r, c| if c == (r + 1) % n { 1.0 } else { 0.0 })
    }

    /// `P x`, i.e. `(P x)_j = x_{j+1}`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n).map(|j| x[(j + 1) % n]).collect()
    }
}

/// Mode-uniform product `B = A Q^m` with
/// `b[k1..km] = sum a[j1..jm] q[j1,k1] ... q[jm,km]`.
///
/// `q` may be rectangular (`n x N`); the result then has dimension `N`,
/// so that `(A Q^m) y^m = A (Q y)^m`.
pub fn matrix_product<T: Tensor>(a: &T, q: &DMatrix<f64>, budget: usize) -> Result<DenseTensor> {
    let (m, n) = (a.order(), a.dim());
    if q.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: q.nrows(),
        });
    }
    let big = q.ncols();
    if big < 2 {
        return Err(Error::Shape("product needs at least 2 columns".into()));
    }
    let widest = n.max(big);
    if index::checked_len(m, widest).is_none_or(|len| len > budget) {
        return Err(Error::BudgetExceeded {
            needed: index::wide_len(m, widest),
            budget,
        });
    }

    let mut data = a.to_dense(budget)?.into_entries();
    // modes < l already have extent `big`, modes >= l still have `n`
    for l in 0..m {
        let left = big.pow(l as u32);
        let right = n.pow((m - l - 1) as u32);
        let mut next = vec![0.0; left * big * right];
        for x in 0..left {
            for j in 0..n {
                let src = &data[(x * n + j) * right..(x * n + j + 1) * right];
                if src.iter().all(|&v| v == 0.0) {
                    continue;
                }
                for k in 0..big {
                    let w = q[(j, k)];
                    if w == 0.0 {
                        continue;
                    }
                    let dst = &mut next[(x * big + k) * right..(x * big + k + 1) * right];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }
            }
        }
        data = next;
    }
    DenseTensor::new(m, big, data)
}

/// Average of `a` over all `m!` rearrangements of `idx`.
fn permutation_average<T: Tensor>(
    a: &T,
    idx: &[usize],
    perms: &[Vec<usize>],
    buf: &mut [usize],
) -> f64 {
    let mut s = 0.0;
    for p in perms {
        for (slot, &src) in buf.iter_mut().zip(p) {
            *slot = idx[src];
        }
        s += a.at(buf);
    }
    s / perms.len() as f64
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    (0..m).permutations(m).collect()
}

/// The symmetric tensor with the same homogeneous form as `a`.
///
/// Averaging over all `m!` index permutations agrees with averaging over the
/// distinct ones, since repeated permutations repeat entries uniformly.
pub fn symmetrize<T: Tensor>(a: &T, budget: usize) -> Result<DenseTensor> {
    let (m, n) = (a.order(), a.dim());
    if index::checked_len(m, n).is_none_or(|len| len > budget) {
        return Err(Error::BudgetExceeded {
            needed: index::wide_len(m, n),
            budget,
        });
    }
    let perms = all_permutations(m);
    let mut buf = vec![0usize; m];
    Ok(DenseTensor::from_fn(m, n, |idx| {
        permutation_average(a, idx, &perms, &mut buf)
    }))
}

/// Symmetrization of a circulant tensor, computed on the root only. The
/// result is again circulant.
pub fn symmetrize_circulant(a: &CirculantTensor) -> CirculantTensor {
    let (m, n) = (a.order(), a.dim());
    let perms = all_permutations(m);
    let mut buf = vec![0usize; m];
    let mut full = vec![0usize; m];
    let root = DenseTensor::from_fn(m - 1, n, |r| {
        full[1..].copy_from_slice(r);
        permutation_average(a, &full, &perms, &mut buf)
    });
    CirculantTensor::from_root(root).expect("symmetrized root stays finite")
}

/// Diagonal tensor carrying the diagonal entries of `a`.
pub fn diagonal_part<T: Tensor>(a: &T, budget: usize) -> Result<DenseTensor> {
    let (m, n) = (a.order(), a.dim());
    if index::checked_len(m, n).is_none_or(|len| len > budget) {
        return Err(Error::BudgetExceeded {
            needed: index::wide_len(m, n),
            budget,
        });
    }
    Ok(DenseTensor::from_fn(m, n, |idx| {
        if idx.iter().all(|&j| j == idx[0]) {
            a.at(idx)
        } else {
            0.0
        }
    }))
}

/// True when every entry equals its simultaneous cyclic shift
/// `a[j1..jm] = a[j1+1..jm+1]` (mod `n`) to within `tol`.
pub fn is_circulant<T: Tensor>(t: &T, tol: f64) -> bool {
    let n = t.dim();
    let mut shifted = vec![0usize; t.order()];
    let mut ok = true;
    index::for_each_index(t.order(), n, |idx| {
        if !ok {
            return;
        }
        for (s, &j) in shifted.iter_mut().zip(idx) {
            *s = (j + 1) % n;
        }
        if (t.at(idx) - t.at(&shifted)).abs() > tol {
            ok = false;
        }
    });
    ok
}

/// Toeplitz check: the shift identity for index tuples whose components
/// all lie in `[n-1]`, without wraparound.
pub fn is_toeplitz<T: Tensor>(t: &T, tol: f64) -> bool {
    let n = t.dim();
    let mut shifted = vec![0usize; t.order()];
    let mut ok = true;
    index::for_each_index(t.order(), n, |idx| {
        if !ok || idx.iter().any(|&j| j + 1 >= n) {
            return;
        }
        for (s, &j) in shifted.iter_mut().zip(idx) {
            *s = j + 1;
        }
        if (t.at(idx) - t.at(&shifted)).abs() > tol {
            ok = false;
        }
    });
    ok
}
