use super::index;
use super::{check_len, DenseTensor, Scalar, Tensor};
use crate::error::{Error, Result};

/// Circulant tensor stored through its root tensor (the first row tensor).
///
/// Entry reduction shifts the first index to 1:
/// `a[j1, ..., jm] = root[(j2 - j1) mod n, ..., (jm - j1) mod n]` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantTensor {
    root: DenseTensor,
}

impl CirculantTensor {
    /// The unique circulant tensor whose first row tensor is `root`.
    /// Its order is one more than the root's.
    pub fn from_root(root: DenseTensor) -> Result<Self> {
        if root.is_empty() {
            return Err(Error::Shape("root tensor is empty".into()));
        }
        // DenseTensor::new already rejects non-finite entries, but a tensor
        // built with from_fn may carry them.
        if let Some(pos) = root.entries().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { root })
    }

    /// Root given as flat row-major entries.
    pub fn from_root_entries(order: usize, dim: usize, root: Vec<f64>) -> Result<Self> {
        if order < 2 {
            return Err(Error::Shape(format!(
                "circulant tensors need order at least 2, got {order}"
            )));
        }
        Self::from_root(DenseTensor::new(order - 1, dim, root)?)
    }

    /// Reads the circulant structure off a dense tensor: the root is the
    /// average over each shift orbit, so an exactly circulant input is
    /// returned unchanged and a nearly circulant one is projected.
    pub fn project(t: &DenseTensor) -> Result<Self> {
        let (m, n) = (t.order(), t.dim());
        if m < 2 {
            return Err(Error::Shape("projection needs order at least 2".into()));
        }
        let mut shifted = vec![0usize; m];
        let root = DenseTensor::from_fn(m - 1, n, |r| {
            let mut s = 0.0;
            for k in 0..n {
                shifted[0] = k;
                for (l, &j) in r.iter().enumerate() {
                    shifted[l + 1] = (j + k) % n;
                }
                s += t.at(&shifted);
            }
            s / n as f64
        });
        Self::from_root(root)
    }

    /// Scaled identity `c I` of the given order.
    pub fn scaled_identity(order: usize, dim: usize, c: f64) -> Result<Self> {
        let mut root = vec![0.0; index::checked_len(order - 1, dim).unwrap_or(0)];
        root[0] = c;
        Self::from_root_entries(order, dim, root)
    }

    pub fn root(&self) -> &DenseTensor {
        &self.root
    }

    /// The diagonal entry `c0`, shared by every diagonal position.
    pub fn diagonal_entry(&self) -> f64 {
        self.root.entries()[0]
    }

    /// The root with its `(1, ..., 1)` entry zeroed.
    pub fn associated(&self) -> DenseTensor {
        let mut e = self.root.entries().to_vec();
        e[0] = 0.0;
        DenseTensor::new(self.root.order(), self.root.dim(), e)
            .expect("associated tensor keeps the root's shape")
    }

    /// The `k`-th row tensor (1-based). Row 1 is the root itself.
    pub fn row_tensor(&self, k: usize) -> Result<DenseTensor> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange {
                index: vec![k],
                dim: n,
            });
        }
        let shift = k - 1;
        let mut red = vec![0usize; self.root.order()];
        Ok(DenseTensor::from_fn(self.root.order(), n, |idx| {
            for (r, &j) in red.iter_mut().zip(idx) {
                *r = (j + n - shift) % n;
            }
            self.root.at(&red)
        }))
    }

    /// Dense tensor agreeing with [`Tensor::at`] everywhere.
    pub fn materialize(&self, budget: usize) -> Result<DenseTensor> {
        self.to_dense(budget)
    }

    pub fn negated(&self) -> CirculantTensor {
        CirculantTensor {
            root: self.root.scaled(-1.0),
        }
    }

    /// Generic contraction `sum_k x_k * (row k) x^{m-1}` carried out on the
    /// root, used by both the real and complex evaluations.
    fn rows_applied<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        let root_order = self.root.order();
        let mut ridx = vec![0usize; root_order];
        let mut pos = 0;
        loop {
            let a = self.root.entries()[pos];
            if a != 0.0 {
                let coeff = T::from(a);
                for (k, slot) in out.iter_mut().enumerate() {
                    let prod = ridx.iter().fold(T::one(), |acc, &j| acc * x[(j + k) % n]);
                    *slot = *slot + coeff * prod;
                }
            }
            pos += 1;
            if !index::advance(&mut ridx, n) {
                break;
            }
        }
        out
    }
}

impl Tensor for CirculantTensor {
    fn order(&self) -> usize {
        self.root.order() + 1
    }

    fn dim(&self) -> usize {
        self.root.dim()
    }

    #[inline]
    fn at(&self, idx: &[usize]) -> f64 {
        let n = self.dim();
        let j1 = idx[0];
        let off = idx[1..]
            .iter()
            .fold(0usize, |acc, &j| acc * n + (j + n - j1) % n);
        self.root.entries()[off]
    }

    fn apply_full(&self, x: &[f64]) -> Result<f64> {
        check_len(x.len(), self.dim())?;
        Ok(self
            .rows_applied(x)
            .iter()
            .zip(x)
            .map(|(r, xk)| r * xk)
            .sum())
    }

    fn apply_partial<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(x.len(), self.dim())?;
        Ok(self.rows_applied(x))
    }

    fn abs_sum(&self) -> f64 {
        self.dim() as f64 * self.root.abs_sum()
    }
}
