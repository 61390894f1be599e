//! Two families with closed-form structure.
//!
//! *Diagonal roots.* When the root tensor is diagonal with entries
//! `c_0, ..., c_{n-1}`, the homogeneous form collapses to
//! `A x^m = sum_{j,l} c_{(l-j) mod n} x_j x_l^{m-1}`, the eigenvalues come
//! from the circulant matrix `C` with first column `c`, and
//! semi-definiteness is decided exactly in several sign patterns.
//!
//! *Doubly circulant tensors.* When the root is itself circulant every row
//! tensor equals the root, so `A x^m = (sum x) * (root x^{m-1})`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::psd::{check_psd, Certificate, PsdOptions, PsdVerdict};
use crate::spectral::{self, root_of_unity_power};
use crate::structure::{self, hat_one_k, is_k_alternative};
use crate::tensor::{
    alternating_ones, check_len, is_circulant, nonneg, positive, unit_vector, CirculantTensor,
    ComplexVector, DenseTensor, Tensor,
};

/// A circulant tensor of order `order` whose root is
/// `diag(c_0, ..., c_{n-1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagRootSpec {
    pub order: usize,
    pub c: Vec<f64>,
}

impl DiagRootSpec {
    pub fn new(order: usize, c: Vec<f64>) -> Result<Self> {
        if order < 2 {
            return Err(Error::Shape(format!(
                "order must be at least 2, got {order}"
            )));
        }
        if c.len() < 2 {
            return Err(Error::Shape(format!(
                "need at least 2 diagonal values, got {}",
                c.len()
            )));
        }
        if let Some(pos) = c.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { order, c })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn expand(&self) -> CirculantTensor {
        let (m, n) = (self.order, self.dim());
        let root = DenseTensor::from_fn(m - 1, n, |idx| {
            if idx.iter().all(|&j| j == idx[0]) {
                self.c[idx[0]]
            } else {
                0.0
            }
        });
        CirculantTensor::from_root(root).expect("finite by construction")
    }

    /// The spec of `a` when its root is diagonal.
    pub fn detect(a: &CirculantTensor) -> Option<Self> {
        let root = a.root();
        let n = a.dim();
        let mut c = vec![0.0; n];
        let mut diagonal = true;
        crate::tensor::index::for_each_index(root.order(), n, |idx| {
            let v = root.at(idx);
            if idx.iter().all(|&j| j == idx[0]) {
                c[idx[0]] = v;
            } else if v != 0.0 {
                diagonal = false;
            }
        });
        diagonal.then(|| Self {
            order: a.order(),
            c,
        })
    }

    /// `lambda_0 = sum c_j`.
    pub fn first_native(&self) -> f64 {
        self.c.iter().sum()
    }

    /// `lambda_{n/2} = sum c_j (-1)^{j (m-1)}`, for even `n`.
    pub fn alternative_native(&self) -> Option<f64> {
        let flip = (self.order - 1) % 2 == 1;
        self.dim().is_multiple_of(2).then(|| {
            self.c
                .iter()
                .enumerate()
                .map(|(j, &v)| if flip && j % 2 == 1 { -v } else { v })
                .sum()
        })
    }
}

/// Circulant matrix with first column `c`:
/// `C[r][s] = c_{(r - s) mod n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirculantMatrix {
    pub c: Vec<f64>,
}

impl CirculantMatrix {
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.c.len();
        DMatrix::from_fn(n, n, |r, s| self.c[(r + n - s) % n])
    }

    /// `mu_k = sum_j c_j w_k^j`, `k = 0..n-1`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let n = self.c.len();
        (0..n)
            .map(|k| {
                self.c
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| root_of_unity_power(n, k, j) * v)
                    .sum()
            })
            .collect()
    }
}

pub fn circulant_matrix(spec: &DiagRootSpec) -> CirculantMatrix {
    CirculantMatrix { c: spec.c.clone() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagEigenpair {
    pub k: usize,
    pub l: usize,
    pub lambda: Complex64,
    pub vector: ComplexVector,
    pub residual: f64,
}

/// For each `k` and `l = 0..m-2`: `lambda = mu_k` with eigenvector
/// `y_j = eta^j`, `eta = exp(2 pi i (k + l n) / (n (m - 1)))`, so that
/// `eta^{m-1} = w_k`. Pairs failing the residual check are dropped.
pub fn diag_root_eigenpairs(spec: &DiagRootSpec) -> Result<Vec<DiagEigenpair>> {
    let (m, n) = (spec.order, spec.dim());
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "eigenpair formula needs order at least 3, got {m}"
        )));
    }
    let a = spec.expand();
    let mus = circulant_matrix(spec).eigenvalues();
    let denom = (n * (m - 1)) as f64;
    let mut out = Vec::with_capacity(n * (m - 1));
    for (k, &lambda) in mus.iter().enumerate() {
        for l in 0..m - 1 {
            let angle = 2.0 * PI * (k + l * n) as f64 / denom;
            let vector: ComplexVector = (0..n)
                .map(|j| Complex64::from_polar(1.0, angle * j as f64))
                .collect();
            let residual = spectral::eigen_residual(&a, lambda, &vector)?;
            if residual <= spectral::RESIDUAL_TOL {
                out.push(DiagEigenpair {
                    k,
                    l,
                    lambda,
                    vector,
                    residual,
                });
            }
        }
    }
    Ok(out)
}

/// `sum_{j,l} c_{(l-j) mod n} x_j x_l^{m-1}`.
pub fn diag_root_form(spec: &DiagRootSpec, x: &[f64]) -> Result<f64> {
    let n = spec.dim();
    check_len(x.len(), n)?;
    let pw: Vec<f64> = x.iter().map(|v| v.powi(spec.order as i32 - 1)).collect();
    let mut total = 0.0;
    for (j, &xj) in x.iter().enumerate() {
        for (d, &c) in spec.c.iter().enumerate() {
            total += c * xj * pw[(j + d) % n];
        }
    }
    Ok(total)
}

fn refute_diag(spec: &DiagRootSpec, witness: Vec<f64>) -> Option<PsdVerdict> {
    let value = diag_root_form(spec, &witness).ok()?;
    if value >= 0.0 {
        return None;
    }
    let a = spec.expand();
    PsdVerdict::refuted(&a, witness)
}

/// Exact decision for even order when the sign pattern of `c` allows it;
/// otherwise inconclusive.
///
/// The checks run in order: `c_0`, `lambda_0`, `lambda_{n/2}` must be
/// nonnegative; `c_0 >= sum_{j>=1} |c_j|` certifies psd; when the tail is
/// non-positive, or `k`-alternative for some `k`, that inequality is also
/// necessary.
pub fn diag_root_psd(spec: &DiagRootSpec) -> Result<PsdVerdict> {
    let (m, n) = (spec.order, spec.dim());
    if m % 2 != 0 {
        return Err(Error::OddOrder(m));
    }
    let mut necessary = vec![
        ("diagonal_entry", spec.c[0], unit_vector(n, 1)),
        ("first_native", spec.first_native(), vec![1.0; n]),
    ];
    if let Some(v) = spec.alternative_native() {
        necessary.push(("alternative_native", v, alternating_ones(n)));
    }
    let scale: f64 = spec.c.iter().map(|v| v.abs()).sum();
    for (name, value, witness) in necessary {
        if !nonneg(value, scale) {
            if let Some(v) = refute_diag(spec, witness) {
                return Ok(v.with_detail(name, value));
            }
        }
    }

    let tail = &spec.c[1..];
    let tail_abs: f64 = tail.iter().map(|v| v.abs()).sum();
    let slack = spec.c[0] - tail_abs;
    if nonneg(slack, scale) {
        let v = if positive(slack, scale) {
            PsdVerdict::psd_strict(Certificate::DiagDominance)
        } else {
            PsdVerdict::psd(Certificate::DiagDominance)
        };
        return Ok(v.with_detail("slack", slack));
    }

    if tail.iter().all(|&v| v <= 0.0) {
        // slack < 0 here means lambda_0 < 0, already refuted above unless
        // rounding intervened
        if let Some(v) = refute_diag(spec, vec![1.0; n]) {
            return Ok(v.with_detail("slack", slack));
        }
    }

    for k in 1..=n / 2 {
        if n % (2 * k) == 0 && is_k_alternative(tail, k)? {
            let witness = hat_one_k(n, k)?;
            if let Some(v) = refute_diag(spec, witness) {
                return Ok(v.with_detail("slack", slack).with_detail("k", k as f64));
            }
        }
    }
    Ok(PsdVerdict::inconclusive().with_detail("slack", slack))
}

/// `A x^m` through `(sum x) * (root x^{m-1})`, and one level deeper,
/// `(sum x)^2 * (inner x^{m-2})`, when the root is doubly circulant too.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublyReduction {
    pub value: f64,
    pub nested: Option<f64>,
}

pub fn doubly_reduce(a: &CirculantTensor, x: &[f64]) -> Result<DoublyReduction> {
    if !structure::is_doubly_circulant(a, 0.0) {
        return Err(Error::InvalidArgument(
            "tensor is not doubly circulant".into(),
        ));
    }
    check_len(x.len(), a.dim())?;
    let s: f64 = x.iter().sum();
    let value = s * a.root().apply_full(x)?;
    let nested = if a.order() >= 4 {
        let inner = a.root().row_tensor(1)?;
        Some(s * s * inner.apply_full(x)?)
    } else {
        None
    };
    Ok(DoublyReduction { value, nested })
}

/// Relative size below which a division remainder counts as zero.
const DIVISIBILITY_TOL: f64 = 1e-10;

/// Semi-definiteness of an even-order doubly circulant tensor.
///
/// `A x^m = (sum x) g(x)` with `g = root x^{m-1}`. If `g` does not vanish
/// on the hyperplane `sum x = 0`, the sign of `A x^m` flips across it and a
/// witness is constructed there. Otherwise `g = (sum x) h(x)`, so
/// `A x^m = (sum x)^2 h(x)`, and `A` is psd exactly when `h` is (by
/// continuity off the hyperplane). The cofactor `h` is the inner root when
/// the root is itself doubly circulant, and is obtained by polynomial
/// division in general.
pub fn doubly_psd(a: &CirculantTensor) -> Result<PsdVerdict> {
    let m = a.order();
    if !structure::is_doubly_circulant(a, 0.0) {
        return Err(Error::InvalidArgument(
            "tensor is not doubly circulant".into(),
        ));
    }
    if !m.is_multiple_of(2) {
        return Err(Error::OddOrder(m));
    }
    let root = a.root();
    let nested = m >= 4 && is_circulant(&root.row_tensor(1)?, 0.0);
    let h = if nested {
        root.row_tensor(1)?
    } else {
        let g = Poly::from_form(root);
        let (quot, rem) = g.divide_by_sum();
        let scale = g.max_abs_coeff();
        if rem.max_abs_coeff() > DIVISIBILITY_TOL * scale {
            return Ok(hyperplane_witness(a, &g, &rem)
                .map(|v| v.with_detail("remainder", rem.max_abs_coeff()))
                .unwrap_or_else(PsdVerdict::inconclusive));
        }
        quot.to_symmetric_tensor(m - 2)
    };
    let mut v = decide_cofactor(a, &h)?;
    if nested {
        v = v.with_detail("nested", 1.0);
    }
    Ok(v)
}

/// On `sum x = 0`, `g` equals the division remainder. Stepping off the
/// hyperplane against the sign of `g` makes `A x^m = (sum x) g(x)` negative.
fn hyperplane_witness(a: &CirculantTensor, g: &Poly, rem: &Poly) -> Option<PsdVerdict> {
    let n = a.dim();
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for j in 1..n {
        let mut x = vec![0.0; n];
        x[0] = -1.0;
        x[j] = 1.0;
        candidates.push(x);
    }
    for t in 1..=4 {
        let mut x: Vec<f64> = (0..n)
            .map(|j| ((j * 7 + t * 3) % 11) as f64 - 5.0)
            .collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v -= s / n as f64);
        candidates.push(x);
    }
    let x0 = candidates
        .into_iter()
        .max_by(|p, q| rem.eval(p).abs().total_cmp(&rem.eval(q).abs()))?;
    let g0 = g.eval(&x0);
    if g0 == 0.0 {
        return None;
    }
    let norm = x0.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for p in 1..=12 {
        let delta = norm * 10f64.powi(-p);
        let x: Vec<f64> = x0.iter().map(|v| v - delta * g0.signum()).collect();
        if let Some(v) = PsdVerdict::refuted(a, x) {
            return Some(v);
        }
    }
    None
}

/// Decides `A` from the cofactor `h` in `A x^m = (sum x)^2 h(x)`.
fn decide_cofactor(a: &CirculantTensor, h: &DenseTensor) -> Result<PsdVerdict> {
    let n = a.dim();
    if h.order() == 2 {
        let hm = DMatrix::from_row_slice(n, n, h.entries());
        let sym = (&hm + hm.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        let (imin, lmin) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("n >= 2");
        let tol = 1e-12 * sym.amax().max(1.0);
        if lmin >= -tol {
            return Ok(PsdVerdict::psd(Certificate::DoublyCirculantReduction)
                .with_detail("cofactor_min_eigenvalue", lmin));
        }
        let v: Vec<f64> = eig.eigenvectors.column(imin).iter().copied().collect();
        return Ok(off_hyperplane_witness(a, &v)
            .map(|w| w.with_detail("cofactor_min_eigenvalue", lmin))
            .unwrap_or_else(PsdVerdict::inconclusive));
    }
    if is_circulant(h, 0.0) {
        let inner = CirculantTensor::project(h)?;
        let v = check_psd(&inner, &PsdOptions::default())?;
        if v.is_psd() {
            return Ok(PsdVerdict::psd(Certificate::DoublyCirculantReduction));
        }
        if let Some(w) = v.witness {
            if let Some(r) = off_hyperplane_witness(a, &w) {
                return Ok(r);
            }
        }
    }
    Ok(PsdVerdict::inconclusive())
}

/// A point near `x` with `sum x != 0` where `A` is negative; `x` is
/// assumed to make the cofactor negative.
fn off_hyperplane_witness(a: &CirculantTensor, x: &[f64]) -> Option<PsdVerdict> {
    let mut shifts = vec![0.0];
    for p in 1..=20 {
        let t = 0.5f64.powi(p);
        shifts.push(t);
        shifts.push(-t);
    }
    shifts.into_iter().find_map(|t| {
        let y: Vec<f64> = x.iter().map(|v| v + t).collect();
        if y.iter().sum::<f64>().abs() > 1e-9 {
            PsdVerdict::refuted(a, y)
        } else {
            None
        }
    })
}
