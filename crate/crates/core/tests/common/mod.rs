#![allow(dead_code)]

use ctensor::{CirculantTensor, DenseTensor};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_circulant(
    rng: &mut ChaCha8Rng,
    order: usize,
    dim: usize,
    lo: f64,
    hi: f64,
) -> CirculantTensor {
    let len = dim.pow(order as u32 - 1);
    CirculantTensor::from_root_entries(order, dim, random_vec(rng, len, lo, hi)).unwrap()
}

pub fn random_dense(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> DenseTensor {
    let len = dim.pow(order as u32);
    DenseTensor::new(order, dim, random_vec(rng, len, -1.0, 1.0)).unwrap()
}

/// Strategy for `(order, dim, root entries)` with `order <= max_order` and
/// `dim <= max_dim`.
pub fn circulant_strategy(
    max_order: usize,
    max_dim: usize,
) -> impl Strategy<Value = CirculantTensor> {
    (2..=max_order, 2..=max_dim).prop_flat_map(|(m, n)| {
        prop::collection::vec(-10.0f64..10.0, n.pow(m as u32 - 1))
            .prop_map(move |root| CirculantTensor::from_root_entries(m, n, root).unwrap())
    })
}

pub fn vector_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
