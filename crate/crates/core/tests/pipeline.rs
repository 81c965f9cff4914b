use std::path::PathBuf;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weber_core::chars::{aronhold_sets_g3, load_or_enumerate, weber_systems, QuadForm};
use weber_core::theta::{RiemannMatrix, ThetaEvalConfig};
use weber_core::weber::{
    iota, jacobi_check, transported_sign, validate_tau, weber_eval, weber_eval_with_basis,
    weber_sign, BitangentFrame, ThetaTable, DEFAULT_NULL_THRESHOLD,
};

fn shipped(name: &str) -> ThetaTable {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    let tau = RiemannMatrix::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    validate_tau(&tau, &ThetaEvalConfig::default(), DEFAULT_NULL_THRESHOLD).unwrap()
}

#[test]
fn sign_chain_for_random_bases() {
    let tables = [shipped("sample_tau.json"), shipped("sample_tau_2.json")];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sets = aronhold_sets_g3();
    for s in sets.choose_multiple(&mut rng, 10) {
        let q_s = s.sum();
        let q_t = s.q_triple(1, 2, 3);
        let family = weber_systems(s, &q_t).unwrap();
        let signs: Vec<i8> = tables
            .iter()
            .map(|t| iota(&family, t, 1e-6).unwrap().sign)
            .collect();
        assert_eq!(signs[0], signs[1], "iota depends on tau");
        assert_eq!(signs[0], weber_sign(&q_s, &q_t).unwrap());
        assert_eq!(signs[0], transported_sign(family.base()).unwrap());
    }
}

#[test]
fn jacobi_signs_stable_over_three_tau() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = ThetaEvalConfig::default();
    let mut tables = vec![shipped("sample_tau.json"), shipped("sample_tau_2.json")];
    tables.push(
        weber_core::weber::random_valid_tau(&mut rng, &cfg)
            .unwrap()
            .1,
    );
    for s in aronhold_sets_g3().iter().step_by(29) {
        let q_t = s.q_triple(1, 2, 3);
        for p in weber_systems(s, &q_t).unwrap().systems() {
            let signs: Vec<i8> = tables
                .iter()
                .map(|t| jacobi_check(p, t, 1e-6).unwrap().sign)
                .collect();
            assert!(signs.iter().all(|&x| x == signs[0]));
        }
    }
}

#[test]
fn weber_quotient_independent_of_basis() {
    let table = shipped("sample_tau.json");
    let frame = BitangentFrame::new(&table).unwrap();
    let evens: Vec<QuadForm> = QuadForm::all_even(3).collect();
    for (a, b) in [(evens[0], evens[5]), (evens[12], evens[30])] {
        let reference = weber_eval(&a, &b, &frame, &table).unwrap();
        let mut n = 0;
        for s in aronhold_sets_g3().iter().filter(|s| s.sum() == a) {
            let Some(s) = s.ordered_for(&b) else { continue };
            let r = weber_eval_with_basis(&s, &frame, &table).unwrap();
            assert!((r.rhs - reference.rhs).norm() < 1e-8 * reference.rhs.norm());
            assert!(r.relative_error < 1e-6);
            n += 1;
        }
        assert!(n >= 2, "only {n} bases for ({a}, {b})");
    }
}

#[test]
fn rescaled_frame_keeps_every_pair() {
    let table = shipped("sample_tau_2.json");
    let frame = BitangentFrame::new(&table).unwrap();
    let mut scaled = frame.clone();
    for (k, q) in QuadForm::all_odd(3).enumerate() {
        scaled
            .rescale(&q, Complex64::from_polar(0.5 + k as f64 / 10.0, k as f64))
            .unwrap();
    }
    let evens: Vec<QuadForm> = QuadForm::all_even(3).collect();
    for b in &evens[1..] {
        let x = weber_eval(&evens[0], b, &frame, &table).unwrap();
        let y = weber_eval(&evens[0], b, &scaled, &table).unwrap();
        assert!((x.rhs - y.rhs).norm() < 1e-8 * x.rhs.norm());
    }
}

#[test]
fn aronhold_cache_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aronhold.json");
    let first = load_or_enumerate(&path).unwrap();
    assert!(path.exists());
    let second = load_or_enumerate(&path).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.len(), 288);
}
