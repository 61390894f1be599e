//! Structural predicates: sign classes, B₀/B tests, k-alternative
//! coefficient vectors and doubly circulant detection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral;
use crate::tensor::{index, is_circulant, nonneg, positive, CirculantTensor, DenseTensor, Tensor};

/// Sign pattern of a tensor, reported in priority order: a tensor that is
/// both nonnegative and alternative reports `Nonnegative`, and the zero
/// tensor reports `Nonnegative`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Nonnegative,
    Nonpositive,
    /// `b[j1..jm] * (-1)^{j1 + ... + jm - m} >= 0` (1-based indices).
    Alternative,
    NegativelyAlternative,
    None,
}

fn all_entries<T: Tensor>(t: &T, mut pred: impl FnMut(&[usize], f64) -> bool) -> bool {
    let mut ok = true;
    index::for_each_index(t.order(), t.dim(), |idx| {
        if ok && !pred(idx, t.at(idx)) {
            ok = false;
        }
    });
    ok
}

/// `(-1)^{sum of 1-based indices - order}` as a sign; with 0-based indices
/// this is the parity of their sum.
#[inline]
fn parity_sign(idx: &[usize]) -> f64 {
    if idx.iter().sum::<usize>() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn is_nonnegative<T: Tensor>(t: &T) -> bool {
    all_entries(t, |_, v| v >= 0.0)
}

pub fn is_nonpositive<T: Tensor>(t: &T) -> bool {
    all_entries(t, |_, v| v <= 0.0)
}

pub fn is_alternative<T: Tensor>(t: &T) -> bool {
    all_entries(t, |idx, v| v * parity_sign(idx) >= 0.0)
}

pub fn is_negatively_alternative<T: Tensor>(t: &T) -> bool {
    all_entries(t, |idx, v| v * parity_sign(idx) <= 0.0)
}

pub fn classify_sign<T: Tensor>(t: &T) -> SignClass {
    if is_nonnegative(t) {
        SignClass::Nonnegative
    } else if is_nonpositive(t) {
        SignClass::Nonpositive
    } else if is_alternative(t) {
        SignClass::Alternative
    } else if is_negatively_alternative(t) {
        SignClass::NegativelyAlternative
    } else {
        SignClass::None
    }
}

/// Relationship between the sign pattern of a circulant tensor and that of
/// its rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowSignReport {
    pub full_alternative: bool,
    pub full_negatively_alternative: bool,
    pub root_alternative: bool,
    pub root_negatively_alternative: bool,
    /// The full tensor is alternative exactly when odd rows are alternative
    /// and even rows negatively alternative. Always expected to hold.
    pub row_parity_consistent: bool,
    /// For even order and even dimension: whether the full tensor's
    /// (negatively) alternative status matches the root's. `None` when the
    /// equivalence is not claimed (odd order or odd dimension).
    pub root_equivalence: Option<bool>,
}

impl RowSignReport {
    pub fn holds(&self) -> bool {
        self.row_parity_consistent && self.root_equivalence.unwrap_or(true)
    }
}

pub fn row_sign_decomposition(a: &CirculantTensor) -> RowSignReport {
    let n = a.dim();
    let full_alternative = is_alternative(a);
    let full_negatively_alternative = is_negatively_alternative(a);
    let rows_pattern = (1..=n).all(|k| {
        let row = a.row_tensor(k).expect("k in range");
        if k % 2 == 1 {
            is_alternative(&row)
        } else {
            is_negatively_alternative(&row)
        }
    });
    let root_alternative = is_alternative(a.root());
    let root_negatively_alternative = is_negatively_alternative(a.root());
    let root_equivalence = (a.order().is_multiple_of(2) && n.is_multiple_of(2)).then_some(
        full_alternative == root_alternative
            && full_negatively_alternative == root_negatively_alternative,
    );
    RowSignReport {
        full_alternative,
        full_negatively_alternative,
        root_alternative,
        root_negatively_alternative,
        row_parity_consistent: full_alternative == rows_pattern,
        root_equivalence,
    }
}

/// Outcome of the B₀/B tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BClassReport {
    pub is_b0: bool,
    pub is_b: bool,
    /// Row sums `sum_{j2..jm} a[j, j2..jm]`, one per row.
    pub row_sums: Vec<f64>,
    /// Largest entry at an off-diagonal position.
    pub max_offdiag: f64,
}

/// B₀/B test from the row definition: for every row `j`, the row sum is
/// nonnegative and the row mean dominates every off-diagonal entry of that
/// row (strictly, for B).
pub fn b_class_general<T: Tensor>(t: &T) -> BClassReport {
    let (m, n) = (t.order(), t.dim());
    let mut row_sums = vec![0.0; n];
    let mut row_abs = vec![0.0; n];
    let mut row_max = vec![f64::NEG_INFINITY; n];
    index::for_each_index(m, n, |idx| {
        let v = t.at(idx);
        let j = idx[0];
        row_sums[j] += v;
        row_abs[j] += v.abs();
        if idx.iter().any(|&k| k != j) {
            row_max[j] = row_max[j].max(v);
        }
    });
    let width = n.pow(m as u32 - 1) as f64;
    let mut is_b0 = true;
    let mut is_b = true;
    for ((s, mx), scale) in row_sums.iter().zip(&row_max).zip(&row_abs) {
        let mean = s / width;
        is_b0 &= nonneg(*s, *scale) && nonneg(mean - mx, scale / width);
        is_b &= positive(*s, *scale) && positive(mean - mx, scale / width);
    }
    BClassReport {
        is_b0,
        is_b,
        row_sums,
        max_offdiag: row_max.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Circulant fast path: the total sum is nonnegative and the overall mean
/// `(1/n^m) sum a` dominates the largest off-diagonal entry. The total is
/// `n * lambda_0` and the off-diagonal entries are exactly the root entries
/// away from `(1, ..., 1)`.
pub fn b_class_circulant(a: &CirculantTensor) -> BClassReport {
    let (m, n) = (a.order(), a.dim());
    let lambda0 = spectral::first_native(a);
    let width = n.pow(m as u32 - 1) as f64;
    let mean = lambda0 / width;
    let scale = a.root().abs_sum();
    let max_offdiag = a.root().entries()[1..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    BClassReport {
        is_b0: nonneg(lambda0, scale) && nonneg(mean - max_offdiag, scale / width),
        is_b: positive(lambda0, scale) && positive(mean - max_offdiag, scale / width),
        row_sums: vec![lambda0; n],
        max_offdiag,
    }
}

/// Whether `c = (c_1, ..., c_{n-1})` is `k`-alternative: `n = 2pk`,
/// `c_{(2q-1)k} >= 0`, `c_{2qk} <= 0`, and every other `c_j` is zero.
///
/// Position `2pk = n` falls outside `c`; it is treated as absent.
pub fn is_k_alternative(c: &[f64], k: usize) -> Result<bool> {
    let n = c.len() + 1;
    if k == 0 || 2 * k > n {
        return Err(Error::InvalidArgument(format!(
            "k must lie in [1, n/2] for n = {n}, got {k}"
        )));
    }
    if !n.is_multiple_of(2 * k) {
        return Ok(false);
    }
    Ok(c.iter().enumerate().all(|(pos, &v)| {
        let j = pos + 1;
        if j % k != 0 {
            v == 0.0
        } else if (j / k) % 2 == 1 {
            v >= 0.0
        } else {
            v <= 0.0
        }
    }))
}

/// Blocks of `k` ones followed by `k` minus ones, repeated to length `n`.
pub fn hat_one_k(n: usize, k: usize) -> Result<Vec<f64>> {
    if k == 0 || !n.is_multiple_of(2 * k) {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is not a multiple of 2k = {}",
            2 * k
        )));
    }
    Ok((0..n)
        .map(|j| if (j / k).is_multiple_of(2) { 1.0 } else { -1.0 })
        .collect())
}

/// A circulant tensor whose root is itself circulant; all its row tensors
/// then coincide with the root.
pub fn is_doubly_circulant(a: &CirculantTensor, tol: f64) -> bool {
    a.order() >= 3 && is_circulant(a.root(), tol)
}

/// Root of the root: for a doubly circulant tensor, the root tensor of the
/// (circulant) root.
pub fn inner_root(a: &CirculantTensor) -> Option<DenseTensor> {
    if a.order() < 3 {
        return None;
    }
    a.root().row_tensor(1).ok()
}
