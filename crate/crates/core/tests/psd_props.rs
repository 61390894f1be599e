mod common;

use common::*;
use ctensor::psd::{
    brute_force_min, check_psd, check_psd_dense, exact_special_cases, sufficient_b_class,
    sufficient_diag_dominance, Certificate, Decision, PsdOptions,
};
use ctensor::{spectral, CirculantTensor, Error, Tensor, DEFAULT_BUDGET};
use rand::Rng;

/// Random even-order circulant tensor whose diagonal is raised by a random
/// fraction of the off-diagonal mass, so that every decision is reachable.
fn random_candidate(r: &mut rand_chacha::ChaCha8Rng, m: usize, n: usize) -> CirculantTensor {
    let mut root = random_vec(r, n.pow(m as u32 - 1), -1.0, 1.0);
    let mass: f64 = root[1..].iter().map(|v| v.abs()).sum();
    root[0] = r.random_range(-0.2..1.2) * mass;
    CirculantTensor::from_root_entries(m, n, root).unwrap()
}

/// Numeric search with a small budget; decisions only need a witness, not
/// the global minimum.
fn light_numeric(seed: u64) -> PsdOptions {
    let mut o = PsdOptions::with_numeric(seed);
    o.restarts = 4;
    o.admm.max_iters = 500;
    o
}

#[test]
fn every_refutation_is_verified_by_direct_evaluation() {
    let mut r = rng(201);
    let mut refuted = 0;
    for trial in 0..300 {
        let m = if trial % 2 == 0 { 2 } else { 4 };
        let n = r.random_range(2..=4);
        let a = random_candidate(&mut r, m, n);
        let v = check_psd(&a, &light_numeric(trial)).unwrap();
        if v.decision == Decision::NotPsd {
            let w = v.witness.as_ref().unwrap();
            let dense = a.materialize(DEFAULT_BUDGET).unwrap();
            let direct = dense.apply_full(w).unwrap();
            assert!(direct < 0.0);
            assert!((direct - v.witness_value.unwrap()).abs() <= 1e-12 * a.abs_sum().max(1.0));
            refuted += 1;
        } else {
            assert!(v.witness.is_none());
        }
        if v.is_psd() {
            assert_ne!(v.certificate, Some(Certificate::NumericEvidence));
            assert!(v.certificate.is_some());
        }
    }
    assert!(refuted > 30, "{refuted}");
}

#[test]
fn certified_tensors_are_nonnegative_on_the_sphere() {
    let mut r = rng(203);
    let mut certified = 0;
    let mut trial = 0;
    while certified < 200 {
        trial += 1;
        assert!(trial < 5000, "too few certified instances");
        let m = if trial % 2 == 0 { 2 } else { 4 };
        let n = r.random_range(2..=3);
        let a = random_candidate(&mut r, m, n);
        let v = check_psd(&a, &PsdOptions::default()).unwrap();
        if !v.is_psd() {
            continue;
        }
        certified += 1;
        let b = brute_force_min(&a, None).unwrap();
        let tol = 1e-9 * a.abs_sum().max(1.0);
        assert!(
            b.value >= -tol,
            "{:?} certified but min {}",
            v.certificate,
            b.value
        );
    }
}

#[test]
fn nonpositive_associated_decided_by_first_native() {
    let mut r = rng(207);
    let mut seen = (0, 0);
    for trial in 0..200 {
        let n = r.random_range(2..=3);
        let mut root = random_vec(&mut r, n * n * n, -1.0, 0.0);
        let mass: f64 = root[1..].iter().map(|v| v.abs()).sum();
        root[0] = r.random_range(0.5..1.5) * mass;
        let a = CirculantTensor::from_root_entries(4, n, root).unwrap();
        let v = exact_special_cases(&a)
            .unwrap()
            .expect("associated tensor is nonpositive");
        let l0 = spectral::first_native(&a);
        assert_eq!(v.is_psd(), l0 >= 0.0, "trial {trial}");
        let b = brute_force_min(&a, None).unwrap();
        let tol = 1e-9 * a.abs_sum();
        if l0 >= 0.0 {
            assert!(b.value >= -tol);
            seen.0 += 1;
        } else {
            assert!(b.value < 0.0);
            assert_eq!(v.witness_value, Some(a.apply_full(&vec![1.0; n]).unwrap()));
            seen.1 += 1;
        }
    }
    assert!(seen.0 > 20 && seen.1 > 20, "{seen:?}");
}

#[test]
fn diagonal_dominance_boundary_is_psd_but_not_strict() {
    let mut r = rng(211);
    for _ in 0..50 {
        let n = r.random_range(2..=3);
        let mut root: Vec<f64> = (0..n * n * n)
            .map(|_| r.random_range(-3i32..=3) as f64)
            .collect();
        root[0] = 0.0;
        let probe = CirculantTensor::from_root_entries(4, n, root.clone()).unwrap();
        let radius = spectral::gershgorin(&probe).radius;
        if radius == 0.0 {
            continue;
        }
        root[0] = radius;
        let a = CirculantTensor::from_root_entries(4, n, root).unwrap();
        let v = sufficient_diag_dominance(&a).unwrap().unwrap();
        assert_eq!(v.decision, Decision::Psd);
        assert_eq!(v.details["slack"], 0.0);
        assert!(check_psd(&a, &PsdOptions::default()).unwrap().is_psd());
        assert!(brute_force_min(&a, None).unwrap().value >= -1e-9 * a.abs_sum());
    }
}

#[test]
fn dominance_and_b0_are_independent_certificates() {
    // one large positive off-diagonal entry: dominant, but above the row mean
    let mut root = vec![0.0; 27];
    root[0] = 2.0;
    root[5] = 2.0;
    let a = CirculantTensor::from_root_entries(4, 3, root).unwrap();
    assert!(sufficient_diag_dominance(&a).unwrap().is_some());
    assert!(sufficient_b_class(&a).unwrap().is_none());
    let v = check_psd(&a, &PsdOptions::default()).unwrap();
    assert_eq!(v.certificate, Some(Certificate::DiagDominance));

    // many moderate positive entries: below the row mean, far from dominant
    let mut root = vec![0.5; 27];
    root[0] = 1.0;
    let a = CirculantTensor::from_root_entries(4, 3, root).unwrap();
    assert!(sufficient_diag_dominance(&a).unwrap().is_none());
    let v = sufficient_b_class(&a).unwrap().unwrap();
    assert!(v.is_psd());
    let v = check_psd(&a, &PsdOptions::default()).unwrap();
    assert!(matches!(
        v.certificate,
        Some(Certificate::B0 | Certificate::B)
    ));
    assert!(brute_force_min(&a, None).unwrap().value >= 0.0);
}

#[test]
fn dense_path_agrees_on_circulant_input() {
    let mut r = rng(213);
    for trial in 0..30 {
        let a = random_candidate(&mut r, 4, 3);
        let dense = a.materialize(DEFAULT_BUDGET).unwrap();
        let opts = light_numeric(trial);
        let x = check_psd(&a, &opts).unwrap();
        let y = check_psd_dense(&dense, &opts).unwrap();
        assert_eq!(x.decision, y.decision);
        assert_eq!(x.certificate, y.certificate);
    }
}

#[test]
fn odd_order_is_rejected() {
    let a = CirculantTensor::from_root_entries(3, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
    assert_eq!(
        check_psd(&a, &PsdOptions::default()),
        Err(Error::OddOrder(3))
    );
}

#[test]
fn numeric_mode_never_upgrades_to_psd() {
    let mut r = rng(217);
    for trial in 0..50 {
        let a = random_candidate(&mut r, 4, 3);
        let exact = check_psd(&a, &PsdOptions::default()).unwrap();
        let numeric = check_psd(&a, &light_numeric(trial)).unwrap();
        if exact.decision == Decision::Inconclusive {
            assert!(!numeric.is_psd());
        } else {
            assert_eq!(exact.decision, numeric.decision);
        }
    }
}
