//! Monte Carlo experiments over seeded random presentations.
//!
//! Every trial draws its own presentation from a seed derived from the
//! master seed, the density index and the trial index with
//! [`derive_seed`], so trials are independent and their results do not
//! depend on how they are scheduled. Output rows are assembled in
//! `(density, trial)` order.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::constructions::{build_counterexample_with, verify_no_dehn_face};
use crate::dehn::greendlinger_check;
use crate::diagram::{glue_relator_to_boundary, isoperimetric_check, BoundaryArc, Diagram};
use crate::pieces::{piece_spectrum, RotationIndex};
use crate::presentation::{sample_seeded, PresentationError, SampleOptions};
use crate::rounding::ceil_len;
use crate::words::{Letter, Orientation};

/// Slack used when none is given.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Random witnesses tried before scanning all occurrences of an arc word.
const RANDOM_WITNESS_TRIES: usize = 8;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("density grid is empty")]
    EmptyGrid,
    #[error("Greendlinger experiment needs at least two faces, got {0}")]
    TooFewFaces(usize),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("thread pool: {0}")]
    Pool(String),
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at density index `d_index`:
/// `s(s(s(master) ⊕ d_index) ⊕ trial)` with `s` the SplitMix64 finalizer.
pub fn derive_seed(master: u64, d_index: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ d_index) ^ trial)
}

/// `%g` with six significant digits.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    // Rounding to six digits can carry into the next power of ten.
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Result of growing a random diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Growth {
    pub diagram: Diagram,
    pub achieved: usize,
    /// Whether the target face count was reached.
    pub complete: bool,
}

/// Grows a reduced disc diagram one face at a time. Each step tries arc
/// lengths from `max(1, ⌈(d−ε)ℓ⌉)` down to 1, boundary positions in random
/// order, and relator occurrences of the inverse arc word chosen at random
/// (then scanned in index order) until a gluing keeps the diagram a reduced
/// disc.
pub fn grow_random_diagram<R: Rng + ?Sized>(index: &RotationIndex<'_>, target_faces: usize, eps: f64, rng: &mut R) -> Growth {
    assert!(target_faces >= 1, "target must be at least one face");
    let p = index.presentation();
    let ell = p.ell();
    let mut diagram = Diagram::single_face(p, rng.gen_range(0..p.len()), Orientation::Direct, 0);
    let longest = ceil_len((p.density() - eps) * ell as f64).max(1);
    while diagram.face_count() < target_faces {
        match grow_once(index, &diagram, longest, rng) {
            Some(next) => diagram = next,
            None => break,
        }
    }
    let achieved = diagram.face_count();
    Growth { diagram, achieved, complete: achieved == target_faces }
}

fn grow_once<R: Rng + ?Sized>(index: &RotationIndex<'_>, d: &Diagram, longest: usize, rng: &mut R) -> Option<Diagram> {
    let p = index.presentation();
    let circuit = d.boundary();
    let n = circuit.len();
    let cap = longest.min(p.ell() - 1).min(n.saturating_sub(1));
    for len in (1..=cap).rev() {
        let mut starts: Vec<usize> = (0..n).collect();
        starts.shuffle(rng);
        for start in starts {
            let arc = BoundaryArc::new(start, len);
            let inverse: Vec<Letter> = arc.half_edges(d).iter().rev().map(|&h| d.half_edge(h).label.inverse()).collect();
            let range = index.range(&inverse);
            if range.is_empty() {
                continue;
            }
            let try_glue = |k: usize| glue_relator_to_boundary(d, p, index.entry(k), arc).ok();
            for _ in 0..RANDOM_WITNESS_TRIES {
                if let Some(g) = try_glue(rng.gen_range(range.clone())) {
                    return Some(g);
                }
            }
            if let Some(g) = range.clone().find_map(try_glue) {
                return Some(g);
            }
        }
    }
    None
}

/// Common experiment parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub m: u32,
    pub ell: usize,
    pub densities: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub eps: f64,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(m: u32, ell: usize, densities: Vec<f64>, trials: usize, master_seed: u64) -> ExperimentConfig {
        ExperimentConfig { m, ell, densities, trials, master_seed, eps: DEFAULT_EPSILON, workers: 1 }
    }

    fn check(&self) -> Result<(), ExperimentError> {
        if self.densities.is_empty() {
            return Err(ExperimentError::EmptyGrid);
        }
        if self.workers == 0 {
            return Err(ExperimentError::NoWorkers);
        }
        Ok(())
    }

    /// Runs `task(d_index, trial)` for every pair on `workers` threads and
    /// returns the results in `(d_index, trial)` order.
    fn run<T: Send>(&self, task: impl Fn(usize, usize) -> Result<T, ExperimentError> + Sync) -> Result<Vec<T>, ExperimentError> {
        let jobs: Vec<(usize, usize)> =
            (0..self.densities.len()).flat_map(|di| (0..self.trials).map(move |t| (di, t))).collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| ExperimentError::Pool(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(|&(di, t)| task(di, t)).collect())
    }

    fn seed(&self, d_index: usize, trial: usize) -> u64 {
        derive_seed(self.master_seed, d_index as u64, trial as u64)
    }
}

/// Two CSV tables: one row per trial and one summary row per group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentOutput {
    pub trials: String,
    pub summary: String,
}

struct PieceRow {
    seed: u64,
    relators: usize,
    max_piece: usize,
}

/// Longest piece per sampled presentation.
///
/// Trials: `d,trial,seed,relators,max_piece,max_piece_over_ell`.
/// Summary: `d,trials,mean,min,q25,median,q75,max` of `max_piece_over_ell`.
pub fn run_piece_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    config.check()?;
    let rows = config.run(|di, t| {
        let seed = config.seed(di, t);
        let p = sample_seeded(config.m, config.ell, config.densities[di], seed, SampleOptions::default())?;
        let spectrum = piece_spectrum(&RotationIndex::new(&p));
        Ok(PieceRow { seed, relators: p.len(), max_piece: spectrum.max_length })
    })?;
    let ell = config.ell as f64;
    let mut trials = String::from("d,trial,seed,relators,max_piece,max_piece_over_ell\n");
    let mut summary = String::from("d,trials,mean,min,q25,median,q75,max\n");
    for (di, chunk) in rows.chunks(config.trials.max(1)).enumerate().filter(|_| config.trials > 0) {
        let d = format_g(config.densities[di]);
        for (t, row) in chunk.iter().enumerate() {
            let _ = writeln!(
                trials,
                "{d},{t},{},{},{},{}",
                row.seed,
                row.relators,
                row.max_piece,
                format_g(row.max_piece as f64 / ell)
            );
        }
        let mut ratios: Vec<f64> = chunk.iter().map(|r| r.max_piece as f64 / ell).collect();
        ratios.sort_by(f64::total_cmp);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let _ = writeln!(
            summary,
            "{d},{},{},{},{},{},{},{}",
            ratios.len(),
            format_g(mean),
            format_g(ratios[0]),
            format_g(quantile(&ratios, 0.25)),
            format_g(quantile(&ratios, 0.5)),
            format_g(quantile(&ratios, 0.75)),
            format_g(ratios[ratios.len() - 1])
        );
    }
    Ok(ExperimentOutput { trials, summary })
}

struct GreendlingerRow {
    seed: u64,
    faces: usize,
    complete: bool,
    boundary: usize,
    long_run_faces: usize,
    weak_faces: usize,
    holds: bool,
    counterexample: Option<(usize, bool)>,
}

/// Greendlinger check on grown diagrams, plus a counterexample search.
///
/// Trials: `d,trial,seed,faces,complete,boundary,long_run_faces,weak_faces,holds,counterexample_found,counterexample_boundary,no_dehn_face`.
/// Summary: `d,trials,pass_rate,counterexamples,no_dehn_face_rate`, the last
/// taken over trials where a counterexample was found (empty if none).
pub fn run_greendlinger_experiment(config: &ExperimentConfig, faces: usize) -> Result<ExperimentOutput, ExperimentError> {
    config.check()?;
    if faces < 2 {
        return Err(ExperimentError::TooFewFaces(faces));
    }
    let rows = config.run(|di, t| {
        let seed = config.seed(di, t);
        let d = config.densities[di];
        let p = sample_seeded(config.m, config.ell, d, seed, SampleOptions::default())?;
        let index = RotationIndex::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1, 0));
        let growth = grow_random_diagram(&index, faces, config.eps, &mut rng);
        let report = greendlinger_check(&growth.diagram, d, config.eps).ok();
        let counterexample = if d < 0.4 {
            build_counterexample_with(&index, config.eps)
                .map(|c| (c.diagram.boundary_length(), verify_no_dehn_face(&c.diagram)))
        } else {
            None
        };
        Ok(GreendlingerRow {
            seed,
            faces: growth.achieved,
            complete: growth.complete,
            boundary: growth.diagram.boundary_length(),
            long_run_faces: report.as_ref().map_or(0, |r| r.long_run_faces.len()),
            weak_faces: report.as_ref().map_or(0, |r| r.weak_faces.len()),
            holds: report.is_some_and(|r| r.holds),
            counterexample,
        })
    })?;
    let mut trials = String::from(
        "d,trial,seed,faces,complete,boundary,long_run_faces,weak_faces,holds,counterexample_found,counterexample_boundary,no_dehn_face\n",
    );
    let mut summary = String::from("d,trials,pass_rate,counterexamples,no_dehn_face_rate\n");
    if config.trials > 0 {
        for (di, chunk) in rows.chunks(config.trials).enumerate() {
            let d = format_g(config.densities[di]);
            for (t, r) in chunk.iter().enumerate() {
                let (found, ce_boundary, no_dehn) = match r.counterexample {
                    Some((b, ok)) => (true, b.to_string(), ok.to_string()),
                    None => (false, String::new(), String::new()),
                };
                let _ = writeln!(
                    trials,
                    "{d},{t},{},{},{},{},{},{},{},{found},{ce_boundary},{no_dehn}",
                    r.seed, r.faces, r.complete, r.boundary, r.long_run_faces, r.weak_faces, r.holds
                );
            }
            let passes = chunk.iter().filter(|r| r.holds).count();
            let found: Vec<bool> = chunk.iter().filter_map(|r| r.counterexample.map(|c| c.1)).collect();
            let rate = if found.is_empty() {
                String::new()
            } else {
                format_g(found.iter().filter(|&&ok| ok).count() as f64 / found.len() as f64)
            };
            let _ = writeln!(
                summary,
                "{d},{},{},{},{rate}",
                chunk.len(),
                format_g(passes as f64 / chunk.len() as f64),
                found.len()
            );
        }
    }
    Ok(ExperimentOutput { trials, summary })
}

struct IsoRow {
    seed: u64,
    faces: usize,
    boundary: usize,
    holds: bool,
}

/// Boundary-to-area ratio of grown diagrams against `1 − 2d − ε`.
///
/// Trials: `d,faces_target,trial,seed,faces,boundary,ratio,threshold,holds`.
/// Summary: `d,faces_target,trials,min_ratio,mean_ratio,threshold,violations`.
/// Each trial samples one presentation and grows one diagram per face target.
pub fn run_isoperimetry_experiment(config: &ExperimentConfig, face_targets: &[usize]) -> Result<ExperimentOutput, ExperimentError> {
    config.check()?;
    let rows = config.run(|di, t| {
        let seed = config.seed(di, t);
        let d = config.densities[di];
        let p = sample_seeded(config.m, config.ell, d, seed, SampleOptions::default())?;
        let index = RotationIndex::new(&p);
        Ok(face_targets
            .iter()
            .enumerate()
            .map(|(fi, &target)| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2, fi as u64));
                let growth = grow_random_diagram(&index, target.max(1), config.eps, &mut rng);
                let report = isoperimetric_check(&growth.diagram, d, config.eps);
                IsoRow { seed, faces: report.faces, boundary: report.boundary, holds: report.holds }
            })
            .collect::<Vec<_>>())
    })?;
    let ell = config.ell as f64;
    let mut trials = String::from("d,faces_target,trial,seed,faces,boundary,ratio,threshold,holds\n");
    let mut summary = String::from("d,faces_target,trials,min_ratio,mean_ratio,threshold,violations\n");
    if config.trials > 0 {
        for (di, chunk) in rows.chunks(config.trials).enumerate() {
            let density = config.densities[di];
            let d = format_g(density);
            let threshold = format_g(1.0 - 2.0 * density - config.eps);
            for (fi, &target) in face_targets.iter().enumerate() {
                let mut ratios = Vec::with_capacity(chunk.len());
                let mut violations = 0;
                for (t, per_trial) in chunk.iter().enumerate() {
                    let r = &per_trial[fi];
                    let ratio = r.boundary as f64 / (ell * r.faces as f64);
                    ratios.push(ratio);
                    violations += usize::from(!r.holds);
                    let _ = writeln!(
                        trials,
                        "{d},{target},{t},{},{},{},{},{threshold},{}",
                        r.seed,
                        r.faces,
                        r.boundary,
                        format_g(ratio),
                        r.holds
                    );
                }
                let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
                let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
                let _ = writeln!(
                    summary,
                    "{d},{target},{},{},{},{threshold},{violations}",
                    ratios.len(),
                    format_g(min),
                    format_g(mean)
                );
            }
        }
    }
    Ok(ExperimentOutput { trials, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(format_g(0.1), "0.1");
        assert_eq!(format_g(0.3333333333), "0.333333");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(123456789.0), "1.23457e+08");
        assert_eq!(format_g(0.00001234), "1.234e-05");
        assert_eq!(format_g(999999.5), "1e+06");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(0.0), "0");
    }

    #[test]
    fn seeds_differ_by_coordinate() {
        let a = derive_seed(1, 0, 0);
        assert_ne!(a, derive_seed(1, 0, 1));
        assert_ne!(a, derive_seed(1, 1, 0));
        assert_ne!(a, derive_seed(2, 0, 0));
        assert_eq!(a, derive_seed(1, 0, 0));
    }

    #[test]
    fn zero_trials_give_headers() {
        let config = ExperimentConfig::new(2, 8, vec![0.1], 0, 1);
        let out = run_piece_experiment(&config).unwrap();
        assert_eq!(out.trials.lines().count(), 1);
        assert_eq!(out.summary.lines().count(), 1);
    }

    #[test]
    fn growth_reaches_target() {
        let p = sample_seeded(2, 20, 0.1, 5, SampleOptions::default()).unwrap();
        let index = RotationIndex::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = grow_random_diagram(&index, 5, 0.05, &mut rng);
        assert!(g.complete);
        assert!(g.diagram.validate(&p).is_valid());
        assert!(crate::diagram::is_reduced_diagram(&g.diagram));
        let one = grow_random_diagram(&index, 1, 0.05, &mut rng);
        assert_eq!(one.achieved, 1);
    }

    #[test]
    fn greendlinger_needs_two_faces() {
        let config = ExperimentConfig::new(2, 8, vec![0.1], 1, 1);
        assert!(matches!(run_greendlinger_experiment(&config, 1), Err(ExperimentError::TooFewFaces(1))));
    }
}
