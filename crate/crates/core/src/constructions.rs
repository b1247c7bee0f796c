//! Explicit diagrams witnessing sharpness of the isoperimetric constant and
//! the failure of Dehn's algorithm above density 1/5.
//!
//! * two faces sharing a piece of length `t = ⌈(2d−ε)ℓ⌉`;
//! * a third face glued along the boundary word `x` of length `2h` that
//!   straddles one end of the shared piece, `h = ⌈(d−ε)ℓ/2⌉` on each side;
//! * two such blocks on six distinct relators, joined by one edge of their
//!   third faces taken near the middle of that face's boundary run.

use serde::Serialize;
use thiserror::Error;

use crate::dehn::greendlinger_check;
use crate::diagram::{face_boundary_stats, glue_diagrams_along, glue_relator_to_boundary, glue_two_relators, BoundaryArc, Diagram};
use crate::pieces::{sharing_candidates, Occurrence, PieceMatch, RotationIndex};
use crate::presentation::Presentation;
use crate::rounding::{ceil_len, floor_len};
use crate::words::Letter;

/// Pairs examined before the counterexample search gives up.
pub const TRIPLE_SCAN_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("three-face construction needs d < 2/5, got {0}")]
    DensityTooHigh(f64),
}

/// Rounded target lengths for relator length `ell`, density `d`, slack `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Targets {
    /// `⌈(2d−ε)ℓ⌉`, at least 1.
    pub piece: usize,
    /// `⌈(d−ε)ℓ/2⌉`, at least 1.
    pub half_straddle: usize,
    /// `⌊ℓ/5⌋`, at least 1.
    pub join_region: usize,
}

impl Targets {
    pub fn new(ell: usize, d: f64, eps: f64) -> Targets {
        let l = ell as f64;
        Targets {
            piece: ceil_len((2.0 * d - eps) * l).max(1),
            half_straddle: ceil_len((d - eps) * l / 2.0).max(1),
            join_region: floor_len(l / 5.0).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFace {
    pub diagram: Diagram,
    /// The piece as found, possibly longer than the target.
    pub found: PieceMatch,
    /// The piece actually glued, of length `targets.piece`.
    pub glued: PieceMatch,
    pub targets: Targets,
}

fn two_face_candidates<'a>(index: &'a RotationIndex<'_>, targets: Targets) -> impl Iterator<Item = TwoFace> + 'a {
    let p = index.presentation();
    let ell = p.ell();
    let t = targets.piece;
    let pairs = if t < ell { sharing_candidates(index, t) } else { Vec::new() };
    pairs.into_iter().filter_map(move |found| {
        let glued = found.truncated(t, ell);
        glue_two_relators(p, &glued).ok().map(|diagram| TwoFace { diagram, found, glued, targets })
    })
}

/// Two relators glued along exactly `⌈(2d−ε)ℓ⌉` letters of a shared piece,
/// the first such pair in scan order; the density is the presentation's.
pub fn build_two_face(p: &Presentation, eps: f64) -> Option<TwoFace> {
    let index = RotationIndex::new(p);
    build_two_face_with(&index, eps)
}

pub fn build_two_face_with(index: &RotationIndex<'_>, eps: f64) -> Option<TwoFace> {
    let p = index.presentation();
    two_face_candidates(index, Targets::new(p.ell(), p.density(), eps)).next()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeFace {
    pub diagram: Diagram,
    /// Relator indices of faces 0, 1, 2.
    pub relators: [usize; 3],
    pub piece: PieceMatch,
    /// The straddling boundary word `x`.
    pub straddle: Vec<Letter>,
    /// Position of `x` on the two-face boundary.
    pub straddle_arc: BoundaryArc,
    /// Boundary edges left on faces 0 and 1.
    pub shares: [usize; 2],
    pub targets: Targets,
}

/// Glues a third relator along the word straddling the start of the shared
/// piece on the boundary of a two-face diagram.
fn extend_to_three(index: &RotationIndex<'_>, two: &TwoFace) -> Option<ThreeFace> {
    let p = index.presentation();
    let d = &two.diagram;
    let ell = p.ell();
    let h = two.targets.half_straddle;
    let circuit = d.boundary();
    let n = circuit.len();
    if 2 * h >= n || 2 * h >= ell {
        return None;
    }
    // The boundary turns from face 0 to face 1 after edge offset_i − 1 of face 0.
    let last_a = d.face(0).cycle[(two.glued.offset_i + ell - 1) % ell];
    let pos = circuit.iter().position(|&e| e == last_a)?;
    let arc = BoundaryArc::new((pos + n + 1 - h) % n, 2 * h);
    let straddle: Vec<Letter> = arc.half_edges(d).iter().map(|&e| d.half_edge(e).label).collect();
    let inverse: Vec<Letter> = straddle.iter().rev().map(|l| l.inverse()).collect();
    let mut occurrences: Vec<Occurrence> = index.occurrences(&inverse).collect();
    occurrences.sort_by_key(|o| (o.relator, o.orientation, o.offset));
    occurrences.into_iter().find_map(|occ| {
        let diagram = glue_relator_to_boundary(d, p, occ, arc).ok()?;
        let stats = face_boundary_stats(&diagram);
        Some(ThreeFace {
            relators: [two.glued.i, two.glued.j, occ.relator],
            piece: two.glued,
            straddle: straddle.clone(),
            straddle_arc: arc,
            shares: [stats[0].total_boundary_edges, stats[1].total_boundary_edges],
            targets: two.targets,
            diagram,
        })
    })
}

fn check_density(d: f64) -> Result<(), ConstructionError> {
    if d >= 0.4 {
        Err(ConstructionError::DensityTooHigh(d))
    } else {
        Ok(())
    }
}

pub fn build_three_face(p: &Presentation, eps: f64) -> Result<Option<ThreeFace>, ConstructionError> {
    check_density(p.density())?;
    let index = RotationIndex::new(p);
    Ok(build_three_face_with(&index, eps))
}

pub fn build_three_face_with(index: &RotationIndex<'_>, eps: f64) -> Option<ThreeFace> {
    let p = index.presentation();
    let targets = Targets::new(p.ell(), p.density(), eps);
    two_face_candidates(index, targets).find_map(|two| extend_to_three(index, &two))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub diagram: Diagram,
    pub blocks: [ThreeFace; 2],
    /// The joining edge as half-edges of the first and second block.
    pub join: (usize, usize),
    pub targets: Targets,
}

/// Boundary circuit positions of the `join_region` edges at the middle of the
/// third face's free run.
fn join_positions(block: &ThreeFace) -> Vec<usize> {
    let d = &block.diagram;
    let ell = d.ell();
    let glued = 2 * block.targets.half_straddle;
    let run = ell - glued;
    let width = block.targets.join_region.min(run);
    let first = glued + (run - width) / 2;
    let circuit = d.boundary();
    (first..first + width)
        .filter_map(|k| {
            let h = d.face(2).cycle[k];
            circuit.iter().position(|&e| e == h)
        })
        .collect()
}

fn join_blocks(a: &ThreeFace, b: &ThreeFace) -> Option<(Diagram, (usize, usize))> {
    let (da, db) = (&a.diagram, &b.diagram);
    let pb = join_positions(b);
    join_positions(a).into_iter().find_map(|pa| {
        let ha = da.boundary()[pa];
        let want = da.half_edge(ha).label.inverse();
        pb.iter().find_map(|&q| {
            let hb = db.boundary()[q];
            if db.half_edge(hb).label != want {
                return None;
            }
            glue_diagrams_along(da, db, BoundaryArc::new(pa, 1), q).ok().map(|d| (d, (ha, hb)))
        })
    })
}

/// Two three-face blocks on six distinct relators joined along one edge.
/// Absent when fewer than two independent blocks can be joined among the
/// first [`TRIPLE_SCAN_LIMIT`] sharing pairs.
pub fn build_counterexample(p: &Presentation, eps: f64) -> Result<Option<Counterexample>, ConstructionError> {
    check_density(p.density())?;
    let index = RotationIndex::new(p);
    Ok(build_counterexample_with(&index, eps))
}

pub fn build_counterexample_with(index: &RotationIndex<'_>, eps: f64) -> Option<Counterexample> {
    let p = index.presentation();
    let targets = Targets::new(p.ell(), p.density(), eps);
    let mut blocks: Vec<ThreeFace> = Vec::new();
    for two in two_face_candidates(index, targets).take(TRIPLE_SCAN_LIMIT) {
        let Some(block) = extend_to_three(index, &two) else { continue };
        for earlier in &blocks {
            let mut all: Vec<usize> = earlier.relators.iter().chain(&block.relators).copied().collect();
            all.sort_unstable();
            all.dedup();
            if all.len() != 6 {
                continue;
            }
            if let Some((diagram, join)) = join_blocks(earlier, &block) {
                return Some(Counterexample { diagram, blocks: [earlier.clone(), block], join, targets });
            }
        }
        blocks.push(block);
    }
    None
}

/// No face has more than half of its edges consecutively on the boundary.
pub fn verify_no_dehn_face(d: &Diagram) -> bool {
    face_boundary_stats(d).iter().all(|s| 2 * s.max_consecutive_run <= d.ell())
}

/// Measured against the closed-form boundary length, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionSummary {
    pub kind: &'static str,
    pub ell: usize,
    pub density: f64,
    pub epsilon: f64,
    pub targets: Targets,
    pub faces: usize,
    pub boundary: usize,
    /// The real formula the boundary is compared with.
    pub expected_boundary: f64,
    pub reduced: bool,
    pub no_dehn_face: bool,
    pub greendlinger_holds: Option<bool>,
}

impl ConstructionSummary {
    pub fn new(kind: &'static str, d: &Diagram, density: f64, eps: f64, targets: Targets) -> ConstructionSummary {
        let l = d.ell() as f64;
        let three = (3.0 - 6.0 * density + 4.0 * eps) * l;
        let expected_boundary = match kind {
            "two-face" => 2.0 * (1.0 - 2.0 * density + eps) * l,
            "three-face" => three,
            _ => 2.0 * three - 2.0,
        };
        ConstructionSummary {
            kind,
            ell: d.ell(),
            density,
            epsilon: eps,
            targets,
            faces: d.face_count(),
            boundary: d.boundary_length(),
            expected_boundary,
            reduced: crate::diagram::is_reduced_diagram(d),
            no_dehn_face: verify_no_dehn_face(d),
            greendlinger_holds: greendlinger_check(d, density, eps).ok().map(|r| r.holds),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{sample_seeded, SampleOptions};
    use crate::words::Orientation;

    #[test]
    fn targets_at_reference_parameters() {
        let t = Targets::new(40, 0.25, 0.05);
        assert_eq!((t.piece, t.half_straddle, t.join_region), (18, 4, 8));
    }

    #[test]
    fn single_relator_has_no_pair() {
        let p = Presentation::from_strs(2, &["aabbab"]).unwrap();
        assert!(build_two_face(&p, 0.05).is_none());
    }

    #[test]
    fn single_face_has_a_dehn_face() {
        let p = Presentation::from_strs(2, &["aabbab"]).unwrap();
        assert!(!verify_no_dehn_face(&Diagram::single_face(&p, 0, Orientation::Direct, 0)));
    }

    #[test]
    fn high_density_is_refused() {
        let p = sample_seeded(2, 6, 0.45, 1, SampleOptions::default()).unwrap();
        assert_eq!(build_three_face(&p, 0.05), Err(ConstructionError::DensityTooHigh(0.45)));
    }

    #[test]
    fn small_three_face_numbers() {
        // ℓ = 20 keeps the test fast; boundary 3ℓ − 2t − 4h exactly.
        let p = sample_seeded(2, 20, 0.25, 7, SampleOptions::default()).unwrap();
        let block = build_three_face(&p, 0.05).unwrap().expect("block found");
        let t = block.targets;
        assert_eq!(block.diagram.boundary_length(), 60 - 2 * t.piece - 4 * t.half_straddle);
        assert_eq!(block.shares, [20 - t.piece - t.half_straddle; 2]);
        assert!(block.diagram.validate(&p).is_valid());
    }
}
