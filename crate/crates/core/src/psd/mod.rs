//! Positive semi-definiteness of even-order circulant tensors.
//!
//! [`check_psd`] runs a fixed chain: cheap necessary conditions (each with
//! an explicit refuting vector), the diagonal-root and doubly circulant
//! closed forms, the sufficient conditions (diagonal dominance, B₀/B), the
//! exact characterizations for sign-structured associated tensors, and
//! finally, when allowed, a numeric search. A `Psd` verdict always carries
//! a certificate from an exact route; numeric evidence alone never yields
//! one. A `NotPsd` verdict always carries a witness `x` with `A x^m < 0`
//! verified by direct evaluation.

mod brute;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

pub use brute::{brute_force_min, BruteForceMin};

use crate::admm::{self, AdmmParams};
use crate::error::{Error, Result};
use crate::special_root::{self, DiagRootSpec};
use crate::spectral;
use crate::structure::{self, SignClass};
use crate::tensor::{
    alternating_ones, is_circulant, nonneg, positive, unit_vector, CirculantTensor, DenseTensor,
    Tensor, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Psd,
    /// Positive definite.
    PsdStrict,
    NotPsd,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    DiagDominance,
    B0,
    B,
    NonPosAssoc,
    NegAlt,
    DiagRoot,
    DoublyCirculantReduction,
    /// Attached to inconclusive verdicts backed only by a numeric search.
    NumericEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub decision: Decision,
    pub certificate: Option<Certificate>,
    /// A vector with `A x^m < 0`, for `NotPsd`.
    pub witness: Option<Vec<f64>>,
    pub witness_value: Option<f64>,
    pub details: BTreeMap<String, f64>,
    /// Names of the checks that ran, in order.
    pub trail: Vec<String>,
}

impl PsdVerdict {
    fn with_decision(decision: Decision, certificate: Option<Certificate>) -> Self {
        Self {
            decision,
            certificate,
            witness: None,
            witness_value: None,
            details: BTreeMap::new(),
            trail: Vec::new(),
        }
    }

    pub fn psd(certificate: Certificate) -> Self {
        Self::with_decision(Decision::Psd, Some(certificate))
    }

    pub fn psd_strict(certificate: Certificate) -> Self {
        Self::with_decision(Decision::PsdStrict, Some(certificate))
    }

    pub fn inconclusive() -> Self {
        Self::with_decision(Decision::Inconclusive, None)
    }

    /// `NotPsd` with `witness`, provided `A x^m < 0` really holds there,
    /// beyond the rounding error of the evaluation.
    pub fn refuted<T: Tensor>(a: &T, witness: Vec<f64>) -> Option<Self> {
        let value = a.apply_full(&witness).ok()?;
        let xmax = witness.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = a.abs_sum() * xmax.powi(a.order() as i32);
        (!nonneg(value, scale)).then(|| {
            let mut v = Self::with_decision(Decision::NotPsd, None);
            v.witness = Some(witness);
            v.witness_value = Some(value);
            v
        })
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn is_psd(&self) -> bool {
        matches!(self.decision, Decision::Psd | Decision::PsdStrict)
    }

    pub fn is_decisive(&self) -> bool {
        self.decision != Decision::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdMode {
    /// Exact routes only.
    CertificatesOnly,
    /// Exact routes, then a multi-start numeric search for a witness.
    WithNumeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdOptions {
    pub mode: PsdMode,
    pub restarts: usize,
    pub admm: AdmmParams,
    /// Largest dense tensor the numeric search may materialize.
    pub budget: usize,
}

impl Default for PsdOptions {
    fn default() -> Self {
        Self {
            mode: PsdMode::CertificatesOnly,
            restarts: 20,
            admm: AdmmParams::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl PsdOptions {
    pub fn with_numeric(seed: u64) -> Self {
        Self {
            mode: PsdMode::WithNumeric,
            admm: AdmmParams {
                seed,
                ..AdmmParams::default()
            },
            ..Self::default()
        }
    }
}

/// Relative threshold below which a numeric minimum counts as negative.
pub const NUMERIC_NEG_TOL: f64 = 1e-6;

/// A necessary condition `A x^m >= 0` at a specific vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessaryCheck {
    pub name: &'static str,
    /// The value the condition requires to be nonnegative.
    pub value: f64,
    pub passed: bool,
    pub witness: Vec<f64>,
}

/// `c0 >= 0` (at `1_1`), `lambda_0 >= 0` (at `1`), and for even `n`
/// `lambda_{n/2} >= 0` (at `(1, -1, ...)`).
pub fn necessary_checks(a: &CirculantTensor) -> Result<Vec<NecessaryCheck>> {
    require_even(a.order())?;
    let n = a.dim();
    let scale = a.root().abs_sum();
    let mut out = vec![
        NecessaryCheck {
            name: "diagonal_entry",
            value: a.diagonal_entry(),
            passed: a.diagonal_entry() >= 0.0,
            witness: unit_vector(n, 1),
        },
        NecessaryCheck {
            name: "first_native",
            value: spectral::first_native(a),
            passed: nonneg(spectral::first_native(a), scale),
            witness: vec![1.0; n],
        },
    ];
    if n.is_multiple_of(2) {
        let v = spectral::alternative_native(a)?;
        out.push(NecessaryCheck {
            name: "alternative_native",
            value: v,
            passed: nonneg(v, scale),
            witness: alternating_ones(n),
        });
    }
    Ok(out)
}

fn require_even(m: usize) -> Result<()> {
    if !m.is_multiple_of(2) {
        return Err(Error::OddOrder(m));
    }
    Ok(())
}

/// `c0 >= sum |associated|` certifies psd (strictly when the inequality is
/// strict).
pub fn sufficient_diag_dominance(a: &CirculantTensor) -> Result<Option<PsdVerdict>> {
    require_even(a.order())?;
    let disc = spectral::gershgorin(a);
    let slack = disc.center - disc.radius;
    let scale = a.root().abs_sum();
    Ok(if positive(slack, scale) {
        Some(PsdVerdict::psd_strict(Certificate::DiagDominance).with_detail("slack", slack))
    } else if nonneg(slack, scale) {
        Some(PsdVerdict::psd(Certificate::DiagDominance).with_detail("slack", slack))
    } else {
        None
    })
}

/// B tensors are positive definite, B₀ tensors psd.
pub fn sufficient_b_class(a: &CirculantTensor) -> Result<Option<PsdVerdict>> {
    require_even(a.order())?;
    let r = structure::b_class_circulant(a);
    Ok(if r.is_b {
        Some(PsdVerdict::psd_strict(Certificate::B))
    } else if r.is_b0 {
        Some(PsdVerdict::psd(Certificate::B0))
    } else {
        None
    })
}

/// Exact answers when the associated tensor is non-positive (psd iff
/// `lambda_0 >= 0`) or, for even `n`, negatively alternative (psd iff
/// `lambda_{n/2} >= 0`).
pub fn exact_special_cases(a: &CirculantTensor) -> Result<Option<PsdVerdict>> {
    require_even(a.order())?;
    let assoc = a.associated();
    let n = a.dim();
    let scale = a.root().abs_sum();
    if structure::is_nonpositive(&assoc) {
        let l0 = spectral::first_native(a);
        let v = if nonneg(l0, scale) {
            Some(PsdVerdict::psd(Certificate::NonPosAssoc))
        } else {
            PsdVerdict::refuted(a, vec![1.0; n])
        };
        return Ok(v.map(|v| v.with_detail("first_native", l0)));
    }
    if n.is_multiple_of(2) && structure::classify_sign(&assoc) == SignClass::NegativelyAlternative {
        let lh = spectral::alternative_native(a)?;
        let v = if nonneg(lh, scale) {
            Some(PsdVerdict::psd(Certificate::NegAlt))
        } else {
            PsdVerdict::refuted(a, alternating_ones(n))
        };
        return Ok(v.map(|v| v.with_detail("alternative_native", lh)));
    }
    Ok(None)
}

/// Runs the decision chain on a circulant tensor of even order.
pub fn check_psd(a: &CirculantTensor, opts: &PsdOptions) -> Result<PsdVerdict> {
    require_even(a.order())?;
    let mut trail = Vec::new();
    let finish = |mut v: PsdVerdict, trail: &mut Vec<String>, name: &str| {
        trail.push(name.to_string());
        v.trail = std::mem::take(trail);
        v
    };

    for chk in necessary_checks(a)? {
        trail.push(chk.name.to_string());
        if !chk.passed {
            if let Some(v) = PsdVerdict::refuted(a, chk.witness.clone()) {
                let mut v = v.with_detail(chk.name, chk.value);
                v.trail = trail;
                return Ok(v);
            }
        }
    }

    if let Some(spec) = DiagRootSpec::detect(a) {
        let v = special_root::diag_root_psd(&spec)?;
        if v.is_decisive() {
            return Ok(finish(v, &mut trail, "diag_root"));
        }
        trail.push("diag_root".into());
    }

    if structure::is_doubly_circulant(a, 0.0) {
        let v = special_root::doubly_psd(a)?;
        if v.is_decisive() {
            return Ok(finish(v, &mut trail, "doubly_circulant"));
        }
        trail.push("doubly_circulant".into());
    }

    if let Some(v) = sufficient_diag_dominance(a)? {
        return Ok(finish(v, &mut trail, "diag_dominance"));
    }
    trail.push("diag_dominance".into());

    if let Some(v) = sufficient_b_class(a)? {
        return Ok(finish(v, &mut trail, "b_class"));
    }
    trail.push("b_class".into());

    if let Some(v) = exact_special_cases(a)? {
        return Ok(finish(v, &mut trail, "sign_structured_associated"));
    }
    trail.push("sign_structured_associated".into());

    if opts.mode == PsdMode::CertificatesOnly {
        let mut v = PsdVerdict::inconclusive();
        v.trail = trail;
        return Ok(v);
    }
    let scale = a.root().abs_sum();
    let v = numeric_search(a, scale, opts)?;
    Ok(finish(v, &mut trail, "numeric"))
}

fn numeric_search<T: Tensor>(a: &T, scale: f64, opts: &PsdOptions) -> Result<PsdVerdict> {
    let dense = a.to_dense(opts.budget)?;
    if dense.order() == 2 {
        // matrices: the bottom eigenvector of the symmetric part is the
        // best candidate
        let n = dense.dim();
        let hm = DMatrix::from_row_slice(n, n, dense.entries());
        let eig = SymmetricEigen::new((&hm + hm.transpose()) * 0.5);
        let imin = eig.eigenvalues.imin();
        let v: Vec<f64> = eig.eigenvectors.column(imin).iter().copied().collect();
        if eig.eigenvalues[imin] < -NUMERIC_NEG_TOL * scale {
            if let Some(v) = PsdVerdict::refuted(a, v) {
                return Ok(v.with_detail("numeric_min", eig.eigenvalues[imin]));
            }
        }
    }
    // the penalty is tuned for entries of unit size, and the sign of the
    // form does not depend on the scale
    let unit = match dense.max_abs() {
        u if u > 0.0 => u,
        _ => 1.0,
    };
    let report = admm::multi_start(&dense.scaled(1.0 / unit), &opts.admm, opts.restarts, None)?;
    let best = report.best;
    let value = best.value * unit;
    if value < -NUMERIC_NEG_TOL * scale {
        if let Some(v) = PsdVerdict::refuted(a, best.point.clone()) {
            return Ok(v.with_detail("numeric_min", value));
        }
    }
    let mut v =
        PsdVerdict::with_decision(Decision::Inconclusive, Some(Certificate::NumericEvidence));
    v.details.insert("numeric_min".into(), value);
    v.details.insert("restarts".into(), opts.restarts as f64);
    Ok(v)
}

/// Semi-definiteness of a general dense tensor. Exactly circulant input is
/// routed through [`check_psd`]; otherwise only the diagonal and all-ones
/// necessary conditions and the numeric search apply.
pub fn check_psd_dense(t: &DenseTensor, opts: &PsdOptions) -> Result<PsdVerdict> {
    require_even(t.order())?;
    if is_circulant(t, 0.0) {
        return check_psd(&CirculantTensor::project(t)?, opts);
    }
    let n = t.dim();
    let mut trail = vec!["not_circulant".to_string()];
    let mut candidates: Vec<Vec<f64>> = (1..=n).map(|j| unit_vector(n, j)).collect();
    candidates.push(vec![1.0; n]);
    for x in candidates {
        if let Some(mut v) = PsdVerdict::refuted(t, x) {
            trail.push("necessary".into());
            v.trail = trail;
            return Ok(v);
        }
    }
    trail.push("necessary".into());
    let mut v = if opts.mode == PsdMode::WithNumeric {
        trail.push("numeric".into());
        numeric_search(t, t.abs_sum() / n as f64, opts)?
    } else {
        PsdVerdict::inconclusive()
    };
    v.trail = trail;
    Ok(v)
}
