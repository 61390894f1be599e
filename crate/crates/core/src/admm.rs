//! Multi-block ADMM for `min A x^m` over the unit sphere.
//!
//! The variable is split into `m` copies `x^1, ..., x^m`, each constrained
//! to the sphere, and the multilinear objective `A x^1 x^2 ... x^m` is
//! minimized subject to the cyclic consensus constraint
//! `x^b - x^{b+1} = 0` (`b = 1..m`, indices mod `m`). Writing the constraint
//! as `sum_j A_j x^j = 0`, block `j` enters consensus row `j` with `+I` and
//! row `j - 1` with `-I`. Each block update is a linear function minimized
//! over the sphere, which has the closed form `x = -b / ||b||`.
//!
//! [`minimize`] and [`multi_start`] work on the symmetrization of `A`. It has
//! the same form `A x^m`, but the splitting of a nonsymmetric tensor into
//! `A x^1 ... x^m` can stall the iteration indefinitely.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{check_len, index, symmetrize, Tensor, DEFAULT_BUDGET};

/// Below this norm the linear subproblem has no well-defined minimizer
/// and the previous block is kept.
const DEGENERATE_NORM: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmmParams {
    /// Penalty parameter.
    pub beta: f64,
    /// Stop once the 2-norm of the change in all blocks and the multiplier
    /// drops below this.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Seed for random starting points.
    pub seed: u64,
}

impl Default for AdmmParams {
    fn default() -> Self {
        Self {
            beta: 1.2,
            epsilon: 1e-6,
            max_iters: 5000,
            seed: 0,
        }
    }
}

impl AdmmParams {
    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Iterate `w = (x^1, ..., x^m, lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub blocks: Vec<Vec<f64>>,
    /// Multiplier, one length-`n` segment per consensus row.
    pub multiplier: Vec<f64>,
    pub iteration: usize,
}

impl AdmmState {
    /// All blocks at `x0 / ||x0||`, multiplier zero.
    pub fn new(x0: &[f64], order: usize) -> Result<Self> {
        let norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let x: Vec<f64> = x0.iter().map(|v| v / norm).collect();
        Ok(Self {
            blocks: vec![x; order],
            multiplier: vec![0.0; order * x0.len()],
            iteration: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmmResult {
    /// `A x^m` at the reported point.
    pub value: f64,
    /// First block, a unit vector.
    pub point: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest 2-norm distance between two blocks at termination.
    pub consensus_gap: f64,
}

/// `sum_j A_j x^j`: segment `b` is `x^b - x^{b+1}`, cyclically.
pub fn consensus_residual(blocks: &[Vec<f64>]) -> Vec<f64> {
    let m = blocks.len();
    let mut r = Vec::with_capacity(m * blocks.first().map_or(0, Vec::len));
    for b in 0..m {
        let next = &blocks[(b + 1) % m];
        r.extend(blocks[b].iter().zip(next).map(|(x, y)| x - y));
    }
    r
}

/// Nonzero entries with their 0-based indices, for repeated contractions.
struct SparseEntries {
    order: usize,
    dim: usize,
    idx: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseEntries {
    fn new<T: Tensor>(a: &T) -> Self {
        let mut idx = Vec::new();
        let mut vals = Vec::new();
        index::for_each_index(a.order(), a.dim(), |i| {
            let v = a.at(i);
            if v != 0.0 {
                idx.extend_from_slice(i);
                vals.push(v);
            }
        });
        Self {
            order: a.order(),
            dim: a.dim(),
            idx,
            vals,
        }
    }

    fn gradient(&self, blocks: &[Vec<f64>], j: usize) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        for (t, &v) in self.vals.iter().enumerate() {
            let ix = &self.idx[t * self.order..(t + 1) * self.order];
            let mut prod = v;
            for (l, &k) in ix.iter().enumerate() {
                if l != j {
                    prod *= blocks[l][k];
                }
            }
            g[ix[j]] += prod;
        }
        g
    }

    fn form(&self, x: &[f64]) -> f64 {
        self.vals
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                self.idx[t * self.order..(t + 1) * self.order]
                    .iter()
                    .fold(v, |acc, &k| acc * x[k])
            })
            .sum()
    }
}

/// Gradient of `A x^1 ... x^m` with respect to block `j` (1-based),
/// with every other block held fixed.
pub fn block_gradient<T: Tensor>(a: &T, blocks: &[Vec<f64>], j: usize) -> Result<Vec<f64>> {
    let m = a.order();
    if blocks.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: blocks.len(),
        });
    }
    for b in blocks {
        check_len(b.len(), a.dim())?;
    }
    if j == 0 || j > m {
        return Err(Error::IndexOutOfRange {
            index: vec![j],
            dim: m,
        });
    }
    Ok(SparseEntries::new(a).gradient(blocks, j - 1))
}

/// Minimizer of `b . x` over the unit sphere, or `previous` when `b`
/// vanishes.
pub fn subproblem(b: &[f64], previous: &[f64]) -> Vec<f64> {
    let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= DEGENERATE_NORM {
        previous.to_vec()
    } else {
        b.iter().map(|v| -v / norm).collect()
    }
}

/// `A_j^T v` for 0-based block `j`: segment `j` minus segment `j - 1`.
fn transpose_apply(v: &[f64], j: usize, m: usize, n: usize) -> Vec<f64> {
    let prev = (j + m - 1) % m;
    (0..n).map(|i| v[j * n + i] - v[prev * n + i]).collect()
}

fn run(entries: &SparseEntries, params: &AdmmParams, x0: &[f64]) -> Result<AdmmResult> {
    let (m, n) = (entries.order, entries.dim);
    let mut st = AdmmState::new(x0, m)?;
    let beta = params.beta;
    let mut residual = consensus_residual(&st.blocks);
    let mut converged = false;

    while st.iteration < params.max_iters {
        st.iteration += 1;
        let mut change_sq = 0.0;
        for j in 0..m {
            // residual with block j removed
            let prev = (j + m - 1) % m;
            let mut r_minus = residual.clone();
            for i in 0..n {
                r_minus[j * n + i] -= st.blocks[j][i];
                r_minus[prev * n + i] += st.blocks[j][i];
            }
            let g = entries.gradient(&st.blocks, j);
            let at_lambda = transpose_apply(&st.multiplier, j, m, n);
            let at_r = transpose_apply(&r_minus, j, m, n);
            let b: Vec<f64> = (0..n)
                .map(|i| g[i] - at_lambda[i] + beta * at_r[i])
                .collect();
            let x = subproblem(&b, &st.blocks[j]);
            change_sq += x
                .iter()
                .zip(&st.blocks[j])
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>();
            for i in 0..n {
                r_minus[j * n + i] += x[i];
                r_minus[prev * n + i] -= x[i];
            }
            residual = r_minus;
            st.blocks[j] = x;
        }
        for (l, r) in st.multiplier.iter_mut().zip(&residual) {
            let step = beta * r;
            *l -= step;
            change_sq += step * step;
        }
        if change_sq.sqrt() < params.epsilon {
            converged = true;
            break;
        }
    }

    let mut gap = 0.0f64;
    for a in 0..m {
        for b in a + 1..m {
            let d = st.blocks[a]
                .iter()
                .zip(&st.blocks[b])
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt();
            gap = gap.max(d);
        }
    }
    let point = st.blocks.swap_remove(0);
    Ok(AdmmResult {
        value: entries.form(&point),
        point,
        iterations: st.iteration,
        converged,
        consensus_gap: gap,
    })
}

/// One ADMM run from `x0` (normalized first).
pub fn minimize<T: Tensor>(a: &T, params: &AdmmParams, x0: &[f64]) -> Result<AdmmResult> {
    params.validate()?;
    check_len(x0.len(), a.dim())?;
    run(
        &SparseEntries::new(&symmetrize(a, DEFAULT_BUDGET)?),
        params,
        x0,
    )
}

/// Normalized standard Gaussian vector; restart `index` of seed `seed`
/// always draws the same vector.
pub fn random_start(n: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Tolerance on `|value - reference|` for a restart to count as a success.
pub const SUCCESS_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiStartReport {
    /// Lowest value over all restarts (earliest restart on ties).
    pub best: AdmmResult,
    /// Final value of each restart, in restart order.
    pub values: Vec<f64>,
    pub iterations_mean: f64,
    pub converged: usize,
    /// Fraction of restarts within [`SUCCESS_TOL`] of the reference, if one
    /// was given.
    pub success_rate: Option<f64>,
    pub time_mean_ms: f64,
}

/// Runs `restarts` independent ADMM instances in parallel from seeded
/// random starts. Results do not depend on the number of worker threads.
pub fn multi_start<T: Tensor>(
    a: &T,
    params: &AdmmParams,
    restarts: usize,
    reference: Option<f64>,
) -> Result<MultiStartReport> {
    params.validate()?;
    if restarts == 0 {
        return Err(Error::InvalidArgument(
            "at least one restart is needed".into(),
        ));
    }
    let entries = SparseEntries::new(&symmetrize(a, DEFAULT_BUDGET)?);
    let n = a.dim();
    let runs: Vec<(AdmmResult, f64)> = (0..restarts as u64)
        .into_par_iter()
        .map(|i| {
            let x0 = random_start(n, params.seed, i);
            let t = Instant::now();
            let r = run(&entries, params, &x0)?;
            Ok((r, t.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, (r, _)) in runs.iter().enumerate() {
        if r.value < runs[best].0.value {
            best = i;
        }
    }
    let count = runs.len() as f64;
    let values: Vec<f64> = runs.iter().map(|(r, _)| r.value).collect();
    let success_rate = reference.map(|v| {
        values
            .iter()
            .filter(|&&x| (x - v).abs() <= SUCCESS_TOL)
            .count() as f64
            / count
    });
    Ok(MultiStartReport {
        iterations_mean: runs.iter().map(|(r, _)| r.iterations as f64).sum::<f64>() / count,
        converged: runs.iter().filter(|(r, _)| r.converged).count(),
        time_mean_ms: runs.iter().map(|(_, t)| t).sum::<f64>() / count,
        success_rate,
        values,
        best: runs[best].0.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{CirculantTensor, DenseTensor};

    #[test]
    fn residual_is_cyclic_difference() {
        let blocks = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(
            consensus_residual(&blocks),
            vec![1.0, -1.0, -1.0, 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn subproblem_points_against_b() {
        assert_eq!(subproblem(&[3.0, 4.0], &[1.0, 0.0]), vec![-0.6, -0.8]);
        assert_eq!(subproblem(&[0.0, 0.0], &[1.0, 0.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn matrix_case_finds_smallest_eigenvalue() {
        // eigenvalues 1 and 3; the bilinear splitting needs a penalty above
        // the eigenvalue spread
        let a = DenseTensor::new(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let p = AdmmParams {
            beta: 10.0,
            ..Default::default()
        };
        let r = multi_start(&a, &p, 8, Some(1.0)).unwrap();
        assert!((r.best.value - 1.0).abs() < 1e-5, "{}", r.best.value);
    }

    #[test]
    fn identity_minimum_on_sphere() {
        // sum x_i^4 on the unit sphere in R^3 has minimum 1/3
        let a = CirculantTensor::scaled_identity(4, 3, 1.0).unwrap();
        let r = multi_start(&a, &AdmmParams::default(), 10, None).unwrap();
        assert!((r.best.value - 1.0 / 3.0).abs() < 1e-5, "{}", r.best.value);
    }

    #[test]
    fn random_start_is_reproducible() {
        assert_eq!(random_start(5, 7, 3), random_start(5, 7, 3));
        assert_ne!(random_start(5, 7, 3), random_start(5, 7, 4));
        let v = random_start(4, 1, 0);
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        let a = DenseTensor::identity(2, 2);
        let p = AdmmParams {
            beta: 0.0,
            ..Default::default()
        };
        assert!(minimize(&a, &p, &[1.0, 0.0]).is_err());
        assert_eq!(
            minimize(&a, &AdmmParams::default(), &[0.0, 0.0]),
            Err(Error::ZeroVector)
        );
    }
}
