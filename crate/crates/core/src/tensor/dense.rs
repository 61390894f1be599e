use super::index::{self, flat};
use super::Tensor;
use crate::error::{Error, Result};

/// Explicit order-`m`, dimension-`n` multi-array in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
}

impl DenseTensor {
    pub fn new(order: usize, dim: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Shape("order must be at least 1".into()));
        }
        if dim < 2 {
            return Err(Error::Shape(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        let expected = index::checked_len(order, dim)
            .ok_or_else(|| Error::Shape(format!("{dim}^{order} overflows")))?;
        if entries.len() != expected {
            return Err(Error::Shape(format!(
                "order {order}, dimension {dim} needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self {
            order,
            dim,
            entries,
        })
    }

    /// Builds a tensor from a closure over 0-based index tuples.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut entries = Vec::with_capacity(index::checked_len(order, dim).unwrap_or(0));
        index::for_each_index(order, dim, |idx| entries.push(f(idx)));
        Self {
            order,
            dim,
            entries,
        }
    }

    pub fn zeros(order: usize, dim: usize) -> Self {
        Self::from_fn(order, dim, |_| 0.0)
    }

    /// The identity tensor: ones on the diagonal, zeros elsewhere.
    pub fn identity(order: usize, dim: usize) -> Self {
        Self::from_fn(order, dim, |idx| {
            if idx.iter().all(|&j| j == idx[0]) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Square matrix from rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("matrix rows must all have length n".into()));
        }
        Self::new(2, n, rows.concat())
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `k`-th row tensor (1-based `k`): entries `a[k, j2, ..., jm]`.
    pub fn row_tensor(&self, k: usize) -> Result<DenseTensor> {
        if self.order < 2 {
            return Err(Error::InvalidArgument(
                "row tensors need order at least 2".into(),
            ));
        }
        if k == 0 || k > self.dim {
            return Err(Error::IndexOutOfRange {
                index: vec![k],
                dim: self.dim,
            });
        }
        let stride = self.entries.len() / self.dim;
        let start = (k - 1) * stride;
        Ok(DenseTensor {
            order: self.order - 1,
            dim: self.dim,
            entries: self.entries[start..start + stride].to_vec(),
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseTensor {
        DenseTensor {
            order: self.order,
            dim: self.dim,
            entries: self.entries.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> DenseTensor {
        self.map(|v| v * s)
    }

    /// Entrywise sum; shapes must match.
    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.same_shape(other)?;
        Ok(DenseTensor {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.add(&other.scaled(-1.0))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &DenseTensor) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True when entries are invariant under every permutation of the
    /// index tuple, to within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let mut sorted = vec![0usize; self.order];
        let mut ok = true;
        index::for_each_index(self.order, self.dim, |idx| {
            if !ok {
                return;
            }
            sorted.copy_from_slice(idx);
            sorted.sort_unstable();
            if (self.at(idx) - self.at(&sorted)).abs() > tol {
                ok = false;
            }
        });
        ok
    }

    fn same_shape(&self, other: &DenseTensor) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::Shape(format!(
                "shape ({}, {}) does not match ({}, {})",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }
}

impl Tensor for DenseTensor {
    fn order(&self) -> usize {
        self.order
    }

    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn at(&self, idx: &[usize]) -> f64 {
        self.entries[flat(idx, self.dim)]
    }

    fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }
}
