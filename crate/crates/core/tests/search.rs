//! Behaviour of the restarted searches on small budgets.

use bellopt::lhv_solver::{critical_noise_fraction, noise_threshold_value, ThresholdOptions, CERTIFICATE_TOL};
use bellopt::observable_search::{
    optimize_general, optimize_multiport, optimize_sg_spin1, AmoebaConfig, BestSettings, SEARCH_FLOOR,
};
use bellopt::quantum_model::{probability_table_sg_spin1, Axis, SgDirections};
use bellopt::Error;

const QUBIT_THRESHOLD: f64 = 0.292_893_218_813_452_5;

fn small(restarts: usize, seed: u64) -> AmoebaConfig {
    AmoebaConfig {
        restarts,
        seed,
        max_evals: 1500,
        ..AmoebaConfig::default()
    }
}

#[test]
fn identical_axes_are_classical() {
    let z = Axis::z();
    let dirs = SgDirections {
        dir_a: [z, z],
        dir_b: [z, z],
    };
    let table = probability_table_sg_spin1(&dirs);
    assert!(critical_noise_fraction(&table).unwrap().f_min.abs() < 1e-12);
    let surrogate = noise_threshold_value(
        &table,
        &ThresholdOptions {
            floor: SEARCH_FLOOR,
            ..ThresholdOptions::default()
        },
    )
    .unwrap();
    assert!(surrogate <= 1e-12);
}

#[test]
fn more_restarts_never_lose_ground() {
    let few = optimize_multiport(3, &small(3, 11)).unwrap();
    let many = optimize_multiport(3, &small(6, 11)).unwrap();
    assert_eq!(few.restart_bests[..], many.restart_bests[..3]);
    assert!(many.best_f >= few.best_f);
}

#[test]
fn searches_are_reproducible() {
    let a = optimize_multiport(4, &small(2, 5)).unwrap();
    let b = optimize_multiport(4, &small(2, 5)).unwrap();
    assert_eq!(a, b);
    let c = optimize_multiport(4, &small(2, 6)).unwrap();
    assert_ne!(a.restart_bests, c.restart_bests);
}

#[test]
fn result_is_best_certified_restart() {
    let r = optimize_multiport(3, &small(4, 3)).unwrap();
    let max = r.restart_bests.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(r.best_f, max);
    assert!((0.0..=1.0).contains(&r.best_f));
    assert!(r.certificate_residual < CERTIFICATE_TOL);
    let again = critical_noise_fraction(&r.best_settings.table().unwrap()).unwrap();
    assert!((again.f_min - r.best_f).abs() < 1e-12);
    assert!(matches!(r.best_settings, BestSettings::Multiport(_)));
    assert_eq!(r.best_settings.flatten().len(), 12);
    assert_eq!(r.evaluations, 4 * 1500);
}

#[test]
fn qubit_searches_reach_the_cirelson_threshold() {
    let cfg = AmoebaConfig {
        restarts: 4,
        seed: 1,
        ..AmoebaConfig::default()
    };
    let multiport = optimize_multiport(2, &cfg).unwrap();
    let general = optimize_general(2, &cfg).unwrap();
    assert!((multiport.best_f - QUBIT_THRESHOLD).abs() < 1e-4, "{}", multiport.best_f);
    assert!((general.best_f - QUBIT_THRESHOLD).abs() < 1e-4, "{}", general.best_f);
    assert!(general.best_f >= multiport.best_f - 1e-4);
}

#[test]
fn four_level_multiports_beat_qutrits() {
    let cfg = AmoebaConfig {
        restarts: 3,
        seed: 2,
        ..AmoebaConfig::default()
    };
    let r = optimize_multiport(4, &cfg).unwrap();
    assert!(r.best_f > 0.3038 && r.best_f < 0.8, "{}", r.best_f);
}

#[test]
fn stern_gerlach_stays_below_qubit_threshold() {
    let r = optimize_sg_spin1(&small(2, 9)).unwrap();
    assert!(r.best_f < QUBIT_THRESHOLD);
    assert_eq!(r.best_settings.flatten().len(), 8);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(optimize_multiport(1, &small(1, 0)), Err(Error::InvalidDimension(1))));
    assert!(matches!(optimize_general(0, &small(1, 0)), Err(Error::InvalidDimension(0))));
    let bad = AmoebaConfig {
        restarts: 0,
        ..AmoebaConfig::default()
    };
    assert!(matches!(optimize_sg_spin1(&bad), Err(Error::InvalidConfig(_))));
}
