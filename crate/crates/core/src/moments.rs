//! Empirical moment tensors of periodic processes.
//!
//! For a period-`n` process `x = (x_1, ..., x_n)` the `m`-th moment tensor
//! has entries `E[x_{i1} ... x_{im}]`. It is symmetric, psd for even `m`
//! (its form is `E[(a . x)^m]`), and circulant when the process is
//! stationary to order `m`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor::{index, matrix_product, DenseTensor, Tensor, DEFAULT_BUDGET};

/// Realizations of one period, one row per trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSample {
    trajectories: Vec<Vec<f64>>,
    period: usize,
}

/// Trajectories averaged per parallel task; partial sums are combined in
/// chunk order so the result is independent of scheduling.
const CHUNK: usize = 1024;

impl ProcessSample {
    /// Keeps the first `period` values of every trajectory.
    pub fn new(trajectories: Vec<Vec<f64>>, period: usize) -> Result<Self> {
        if period < 2 {
            return Err(Error::Shape(format!(
                "period must be at least 2, got {period}"
            )));
        }
        if trajectories.is_empty() {
            return Err(Error::InvalidArgument("sample has no trajectories".into()));
        }
        let mut out = Vec::with_capacity(trajectories.len());
        for (row, mut t) in trajectories.into_iter().enumerate() {
            if t.len() < period {
                return Err(Error::Shape(format!(
                    "trajectory {row} has {} values, period is {period}",
                    t.len()
                )));
            }
            if let Some(pos) = t.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(row * period + pos));
            }
            t.truncate(period);
            out.push(t);
        }
        Ok(Self {
            trajectories: out,
            period,
        })
    }

    /// `count` trajectories of independent fair `+-1` signs.
    pub fn iid_signs(count: usize, period: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..count)
            .map(|_| {
                (0..period)
                    .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect();
        Self::new(rows, period)
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn trajectories(&self) -> &[Vec<f64>] {
        &self.trajectories
    }

    /// Every trajectory mapped through `y = B^T x` (`B` is `n x N`).
    pub fn transformed(&self, b: &DMatrix<f64>) -> Result<Self> {
        if b.nrows() != self.period {
            return Err(Error::DimensionMismatch {
                expected: self.period,
                got: b.nrows(),
            });
        }
        let rows = self
            .trajectories
            .iter()
            .map(|x| {
                (0..b.ncols())
                    .map(|k| (0..self.period).map(|j| b[(j, k)] * x[j]).sum())
                    .collect()
            })
            .collect();
        Self::new(rows, b.ncols())
    }
}

fn accumulate(out: &mut [f64], x: &[f64], order: usize) {
    let n = x.len();
    let mut idx = vec![0usize; order];
    let mut pos = 0;
    loop {
        out[pos] += idx.iter().map(|&j| x[j]).product::<f64>();
        pos += 1;
        if !index::advance(&mut idx, n) {
            break;
        }
    }
}

/// Sample mean of `x_{i1} ... x_{im}` over all trajectories.
pub fn moment_tensor(sample: &ProcessSample, order: usize) -> Result<DenseTensor> {
    if order < 1 {
        return Err(Error::Shape("moment order must be positive".into()));
    }
    let n = sample.period;
    let len = match index::checked_len(order, n) {
        Some(len) if len <= DEFAULT_BUDGET => len,
        _ => {
            return Err(Error::BudgetExceeded {
                needed: index::wide_len(order, n),
                budget: DEFAULT_BUDGET,
            })
        }
    };
    let partials: Vec<Vec<f64>> = sample
        .trajectories
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; len];
            for x in chunk {
                accumulate(&mut acc, x, order);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; len];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let count = sample.len() as f64;
    total.iter_mut().for_each(|v| *v /= count);
    DenseTensor::new(order, n, total)
}

/// Moment tensor of `y = B^T x` from that of `x`: `M B^m`.
pub fn moment_pushforward<T: Tensor>(
    moments: &T,
    b: &DMatrix<f64>,
    budget: usize,
) -> Result<DenseTensor> {
    matrix_product(moments, b, budget)
}
