//! Native eigenvalues of circulant tensors.
//!
//! Every circulant tensor of dimension `n` shares the eigenvectors
//! `v_k = (1, w_k, w_k^2, ..., w_k^{n-1})` with `w_k = exp(2 pi i k / n)`.
//! The matching eigenvalue is the associated polynomial
//! `f(t) = sum root[j1..j_{m-1}] t^{(j1 - 1) + ... + (j_{m-1} - 1)}`
//! evaluated at `w_k`. Because the evaluation points are `n`-th roots of
//! unity, exponents are reduced mod `n` once, giving `n` coefficients.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::structure::{self, SignClass};
use crate::tensor::{componentwise_pow, index, CirculantTensor, ComplexVector, Scalar, Tensor};

/// The `n` native eigenvalues together with the reduced coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NativeSpectrum {
    pub lambdas: Vec<Complex64>,
    pub coeffs: Vec<f64>,
}

impl NativeSpectrum {
    pub fn first(&self) -> f64 {
        self.lambdas[0].re
    }

    /// `lambda_{n/2}`, present only for even `n`.
    pub fn alternative(&self) -> Option<f64> {
        let n = self.lambdas.len();
        n.is_multiple_of(2).then(|| self.lambdas[n / 2].re)
    }
}

/// `w_k^s = exp(2 pi i (k s mod n) / n)`, reduced before the trig call.
pub fn root_of_unity_power(n: usize, k: usize, s: usize) -> Complex64 {
    let r = (k * s) % n;
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// The common eigenvector `v_k`.
pub fn native_eigenvector(n: usize, k: usize) -> ComplexVector {
    (0..n).map(|j| root_of_unity_power(n, k, j)).collect()
}

/// `coeffs[s]` sums the root entries whose exponent is `s` mod `n`.
pub fn associated_coeffs(a: &CirculantTensor) -> Vec<f64> {
    let n = a.dim();
    let root = a.root();
    let mut coeffs = vec![0.0; n];
    let mut pos = 0;
    index::for_each_index(root.order(), n, |idx| {
        let s = idx.iter().sum::<usize>() % n;
        coeffs[s] += root.entries()[pos];
        pos += 1;
    });
    coeffs
}

pub fn native_eigenvalues(a: &CirculantTensor) -> NativeSpectrum {
    let coeffs = associated_coeffs(a);
    let n = coeffs.len();
    let lambdas = (0..n)
        .map(|k| {
            coeffs
                .iter()
                .enumerate()
                .map(|(s, &c)| root_of_unity_power(n, k, s) * c)
                .sum()
        })
        .collect();
    NativeSpectrum { lambdas, coeffs }
}

/// `lambda_0`: the sum of all root entries. Its H-eigenvector is `1`.
pub fn first_native(a: &CirculantTensor) -> f64 {
    a.root().entries().iter().sum()
}

/// `lambda_{n/2}`: the sum of root entries signed by the parity of
/// `(j1 - 1) + ... + (j_{m-1} - 1)`. Its H-eigenvector is `(1, -1, 1, ...)`.
pub fn alternative_native(a: &CirculantTensor) -> Result<f64> {
    let n = a.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "alternative native eigenvalue needs even dimension, got {n}"
        )));
    }
    let root = a.root();
    let mut total = 0.0;
    let mut pos = 0;
    index::for_each_index(root.order(), n, |idx| {
        let v = root.entries()[pos];
        total += if idx.iter().sum::<usize>() % 2 == 0 {
            v
        } else {
            -v
        };
        pos += 1;
    });
    Ok(total)
}

/// Disc `|lambda - c0| <= sum |associated|` containing every eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GershgorinDisc {
    pub center: f64,
    pub radius: f64,
}

impl GershgorinDisc {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (z - self.center).norm() <= self.radius + tol
    }
}

pub fn gershgorin(a: &CirculantTensor) -> GershgorinDisc {
    GershgorinDisc {
        center: a.diagonal_entry(),
        radius: a.associated().abs_sum(),
    }
}

/// Acceptance threshold for [`eigen_residual`].
pub const RESIDUAL_TOL: f64 = 1e-8;

/// `||A x^{m-1} - lambda x^{[m-1]}||_inf / max(1, ||x||_inf^{m-1})`.
pub fn eigen_residual<T: Tensor>(a: &T, lambda: Complex64, x: &[Complex64]) -> Result<f64> {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let lhs = a.apply_partial(x)?;
    let rhs = componentwise_pow(x, a.order() - 1);
    let worst = lhs
        .iter()
        .zip(&rhs)
        .map(|(l, r)| (*l - lambda * *r).norm())
        .fold(0.0f64, f64::max);
    Ok(worst / scale.powi(a.order() as i32 - 1).max(1.0))
}

/// Real convenience wrapper around [`eigen_residual`].
pub fn eigen_residual_real<T: Tensor>(a: &T, lambda: f64, x: &[f64]) -> Result<f64> {
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::from(v)).collect();
    eigen_residual(a, Complex64::from(lambda), &xc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremeKind {
    Largest,
    Smallest,
}

/// Why an extreme H-eigenvalue could be identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremeBasis {
    /// Associated tensor nonnegative: `lambda_0` is the largest.
    NonnegativeAssociated,
    /// Associated tensor non-positive: `lambda_0` is the smallest.
    NonpositiveAssociated,
    /// Associated tensor alternative (even `n`): `lambda_{n/2}` is the largest.
    AlternativeAssociated,
    /// Associated tensor negatively alternative: `lambda_{n/2}` is the smallest.
    NegativelyAlternativeAssociated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremeEigenvalue {
    pub value: f64,
    pub kind: ExtremeKind,
    pub basis: ExtremeBasis,
}

/// Identifies the largest or smallest H-eigenvalue when the sign pattern of
/// the associated tensor pins it to `lambda_0` or `lambda_{n/2}`.
pub fn extreme_h_eigenvalue(a: &CirculantTensor) -> Option<ExtremeEigenvalue> {
    let assoc = a.associated();
    let even_n = a.dim().is_multiple_of(2);
    let (kind, basis) = if structure::is_nonnegative(&assoc) {
        (ExtremeKind::Largest, ExtremeBasis::NonnegativeAssociated)
    } else if structure::is_nonpositive(&assoc) {
        (ExtremeKind::Smallest, ExtremeBasis::NonpositiveAssociated)
    } else if even_n && structure::classify_sign(&assoc) == SignClass::Alternative {
        (ExtremeKind::Largest, ExtremeBasis::AlternativeAssociated)
    } else if even_n && structure::classify_sign(&assoc) == SignClass::NegativelyAlternative {
        (
            ExtremeKind::Smallest,
            ExtremeBasis::NegativelyAlternativeAssociated,
        )
    } else {
        return None;
    };
    let value = match basis {
        ExtremeBasis::NonnegativeAssociated | ExtremeBasis::NonpositiveAssociated => {
            first_native(a)
        }
        _ => alternative_native(a).expect("even dimension checked above"),
    };
    Some(ExtremeEigenvalue { value, kind, basis })
}

/// `A x^m` over either field, through `x . (A x^{m-1})`.
pub fn form_on<T: Tensor, S: Scalar>(a: &T, x: &[S]) -> Result<S> {
    let partial = a.apply_partial(x)?;
    Ok(partial
        .iter()
        .zip(x)
        .fold(S::zero(), |acc, (p, v)| acc + *p * *v))
}
