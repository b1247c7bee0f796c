mod support;

use randgroups::experiments::{
    run_greendlinger_experiment, run_isoperimetry_experiment, run_piece_experiment, ExperimentConfig,
};
use support::{grow, sample};

fn config(densities: Vec<f64>, trials: usize, workers: usize) -> ExperimentConfig {
    ExperimentConfig { workers, ..ExperimentConfig::new(2, 16, densities, trials, 77) }
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let base = config(vec![0.1, 0.2], 6, 1);
    let pieces = run_piece_experiment(&base).unwrap();
    let green = run_greendlinger_experiment(&base, 3).unwrap();
    let iso = run_isoperimetry_experiment(&base, &[1, 3]).unwrap();
    for workers in [4, 16] {
        let c = ExperimentConfig { workers, ..base.clone() };
        assert_eq!(run_piece_experiment(&c).unwrap(), pieces);
        assert_eq!(run_greendlinger_experiment(&c, 3).unwrap(), green);
        assert_eq!(run_isoperimetry_experiment(&c, &[1, 3]).unwrap(), iso);
    }
    assert_eq!(pieces.trials.lines().count(), 1 + 12);
    assert_eq!(iso.trials.lines().count(), 1 + 24);
}

#[test]
fn single_face_rows_have_ratio_one() {
    let out = run_isoperimetry_experiment(&config(vec![0.1], 5, 2), &[1]).unwrap();
    for row in out.trials.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[6], "1");
        assert_eq!(fields[8], "true");
    }
}

#[test]
fn zero_density_has_one_relator() {
    let out = run_piece_experiment(&config(vec![0.0], 3, 1)).unwrap();
    for row in out.trials.lines().skip(1) {
        assert_eq!(row.split(',').nth(3), Some("1"));
    }
}

#[test]
fn growth_targets() {
    let p = sample(2, 30, 0.2, 4);
    let index = randgroups::pieces::RotationIndex::new(&p);
    assert_eq!(grow(&index, 1, 0.05, 1).diagram.face_count(), 1);
    let two = grow(&index, 2, 0.05, 1);
    assert!(two.complete);
    assert_eq!(two.diagram.face_count(), 2);
}

/// Mean longest piece at (m=2, ℓ=60, d=0.10). With N = 3^6 relators the
/// longest coincidence among ≈ (2Nℓ)²/2 position pairs is about
/// 2dℓ + 2 log₃(2ℓ) letters, so the band is [2d, 2d + 2log₃(2ℓ)/ℓ + 0.04].
#[test]
fn piece_mean_at_reference_density() {
    let c = ExperimentConfig { workers: 4, ..ExperimentConfig::new(2, 60, vec![0.10], 100, 2024) };
    let out = run_piece_experiment(&c).unwrap();
    let row = out.summary.lines().nth(1).unwrap();
    let mean: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    let upper = 0.2 + 2.0 * (120f64).ln() / 3f64.ln() / 60.0 + 0.04;
    assert!((0.2..=upper).contains(&mean), "mean {mean}");
}
