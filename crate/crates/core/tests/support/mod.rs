//! Shared helpers for the integration tests: independent oracles and
//! seeded fixtures.
#![allow(dead_code)]

pub mod dehn_oracle;
pub mod precise;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randgroups::diagram::Diagram;
use randgroups::experiments::{grow_random_diagram, Growth};
use randgroups::pieces::RotationIndex;
use randgroups::presentation::{sample_seeded, Presentation, SampleOptions};

pub fn sample(m: u32, ell: usize, d: f64, seed: u64) -> Presentation {
    sample_seeded(m, ell, d, seed, SampleOptions::default()).expect("sampling succeeds")
}

pub fn sample_count(m: u32, ell: usize, count: usize, seed: u64) -> Presentation {
    let options = SampleOptions { count_override: Some(count), ..SampleOptions::default() };
    sample_seeded(m, ell, 0.0, seed, options).expect("sampling succeeds")
}

pub fn grow(index: &RotationIndex<'_>, faces: usize, eps: f64, seed: u64) -> Growth {
    grow_random_diagram(index, faces, eps, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Number of boundary half-edges belonging to face `f`.
pub fn boundary_edges_of(d: &Diagram, f: usize) -> usize {
    d.face(f).cycle.iter().filter(|&&h| d.half_edge(h).twin.is_none()).count()
}
