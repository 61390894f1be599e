use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Grid minimum of `A x^m` over the unit sphere, polished locally.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceMin {
    pub value: f64,
    pub point: Vec<f64>,
    /// `grid_points`, `spacing`, and `gap_bound`: a Lipschitz estimate of how
    /// far the true minimum can lie below the best grid value.
    pub details: BTreeMap<String, f64>,
}

const DEFAULT_CIRCLE_POINTS: usize = 2000;
const DEFAULT_SPHERE_POINTS: usize = 10_000;
const POLISH_CANDIDATES: usize = 8;

/// Exhaustive minimization for `n = 2` (angular grid plus golden-section
/// refinement) and `n = 3` (Fibonacci sphere plus a compass search in the
/// tangent plane). `points` overrides the grid size.
pub fn brute_force_min<T: Tensor>(a: &T, points: Option<usize>) -> Result<BruteForceMin> {
    let f = |x: &[f64]| a.apply_full(x).expect("dimension fixed");
    let lipschitz = a.order() as f64 * a.abs_sum();
    match a.dim() {
        2 => Ok(circle(
            &f,
            points.unwrap_or(DEFAULT_CIRCLE_POINTS),
            lipschitz,
        )),
        3 => Ok(sphere(
            &f,
            points.unwrap_or(DEFAULT_SPHERE_POINTS),
            lipschitz,
        )),
        n => Err(Error::InvalidArgument(format!(
            "brute force supports dimension 2 or 3, got {n}"
        ))),
    }
}

fn best_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    order.truncate(k);
    order
}

fn circle(f: &impl Fn(&[f64]) -> f64, points: usize, lipschitz: f64) -> BruteForceMin {
    let points = points.max(8);
    let h = 2.0 * PI / points as f64;
    let g = |t: f64| f(&[t.cos(), t.sin()]);
    let values: Vec<f64> = (0..points).map(|i| g(i as f64 * h)).collect();

    let mut best_t = 0.0;
    let mut best = f64::INFINITY;
    for i in best_indices(&values, POLISH_CANDIDATES) {
        let t0 = i as f64 * h;
        let (t, v) = golden_section(&g, t0 - h, t0 + h);
        let (t, v) = if v < values[i] {
            (t, v)
        } else {
            (t0, values[i])
        };
        if v < best {
            best = v;
            best_t = t;
        }
    }
    let mut details = BTreeMap::new();
    details.insert("grid_points".into(), points as f64);
    details.insert("spacing".into(), h);
    details.insert("gap_bound".into(), lipschitz * h / 2.0);
    BruteForceMin {
        value: best,
        point: vec![best_t.cos(), best_t.sin()],
        details,
    }
}

fn golden_section(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    while hi - lo > 1e-13 {
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - r * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + r * (hi - lo);
            gd = g(d);
        }
    }
    let t = (lo + hi) / 2.0;
    (t, g(t))
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn fibonacci_point(i: usize, count: usize) -> [f64; 3] {
    let golden = PI * (3.0 - 5f64.sqrt());
    let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
    let r = (1.0 - z * z).sqrt();
    let phi = golden * i as f64;
    [r * phi.cos(), r * phi.sin(), z]
}

fn sphere(f: &impl Fn(&[f64]) -> f64, points: usize, lipschitz: f64) -> BruteForceMin {
    let points = points.max(16);
    let grid: Vec<[f64; 3]> = (0..points).map(|i| fibonacci_point(i, points)).collect();
    let values: Vec<f64> = grid.iter().map(|p| f(p)).collect();
    // mean spacing for equal-area cells; the covering radius of the
    // Fibonacci lattice stays within a small factor of it
    let spacing = (4.0 * PI / points as f64).sqrt();

    let mut best = f64::INFINITY;
    let mut best_p = grid[0];
    for i in best_indices(&values, POLISH_CANDIDATES) {
        let (p, v) = compass(f, grid[i], spacing);
        if v < best {
            best = v;
            best_p = p;
        }
    }
    let mut details = BTreeMap::new();
    details.insert("grid_points".into(), points as f64);
    details.insert("spacing".into(), spacing);
    details.insert("gap_bound".into(), lipschitz * spacing);
    BruteForceMin {
        value: best,
        point: best_p.to_vec(),
        details,
    }
}

/// Derivative-free descent on `u, v -> f(normalize(x0 + u e1 + v e2))`.
fn compass(f: &impl Fn(&[f64]) -> f64, x0: [f64; 3], step0: f64) -> ([f64; 3], f64) {
    let mut x = x0;
    let mut fx = f(&x);
    let mut step = step0;
    let mut iters = 0;
    while step > 1e-12 && iters < 20_000 {
        iters += 1;
        let helper = if x[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = normalize(cross(x, helper));
        let e2 = cross(x, e1);
        let mut moved = false;
        for (du, dv) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let y = normalize([
                x[0] + step * (du * e1[0] + dv * e2[0]),
                x[1] + step * (du * e1[1] + dv * e2[1]),
                x[2] + step * (du * e1[2] + dv * e2[2]),
            ]);
            let fy = f(&y);
            if fy < fx {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    (x, fx)
}
