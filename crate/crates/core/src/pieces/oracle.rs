//! Exhaustive reference implementations of the piece analyses.
//!
//! Every function here scans all offset pairs in both orientations letter by
//! letter and shares no code with the indexed fast path. They are the oracles
//! the fast path is tested against.

use super::{PieceMatch, PieceSpectrum};
use crate::presentation::Presentation;
use crate::words::{oriented_letter, Letter, Orientation};

/// Cyclic common length of `r_i` at `offset_i` and `r_j` (read in
/// `orientation`) at `offset_j`, capped at `ell`.
pub fn common_length(p: &Presentation, i: usize, offset_i: usize, j: usize, offset_j: usize, orientation: Orientation) -> usize {
    let ell = p.ell();
    let a = p.relator(i).letters();
    let b = p.relator(j).letters();
    (0..ell)
        .take_while(|&k| oriented_letter(a, Orientation::Direct, offset_i + k) == oriented_letter(b, orientation, offset_j + k))
        .count()
}

fn excluded(i: usize, offset_i: usize, j: usize, offset_j: usize, orientation: Orientation) -> bool {
    i == j && offset_i == offset_j && orientation == Orientation::Direct
}

fn make(p: &Presentation, i: usize, j: usize, offset_i: usize, offset_j: usize, orientation: Orientation, length: usize) -> PieceMatch {
    PieceMatch { i, j, offset_i, offset_j, orientation, length, full: length == p.ell() }
}

/// Longest piece between `r_i` and `r_j`; ties go to the smallest
/// `(offset_i, offset_j, orientation)`.
pub fn max_common_piece(p: &Presentation, i: usize, j: usize) -> PieceMatch {
    let ell = p.ell();
    let mut best: Option<PieceMatch> = None;
    for offset_i in 0..ell {
        for offset_j in 0..ell {
            for orientation in Orientation::BOTH {
                if excluded(i, offset_i, j, offset_j, orientation) {
                    continue;
                }
                let len = common_length(p, i, offset_i, j, offset_j, orientation);
                if best.as_ref().is_none_or(|b| len > b.length) {
                    best = Some(make(p, i, j, offset_i, offset_j, orientation, len));
                }
            }
        }
    }
    best.expect("at least one offset pair exists")
}

/// Position spectrum and global maximum by exhaustive scan.
pub fn spectrum(p: &Presentation) -> PieceSpectrum {
    let ell = p.ell();
    let n = p.len();
    let mut histogram = vec![0u64; ell + 1];
    let mut witness: Option<PieceMatch> = None;
    for i in 0..n {
        for offset_i in 0..ell {
            let mut longest = 0;
            for j in 0..n {
                for offset_j in 0..ell {
                    for orientation in Orientation::BOTH {
                        if excluded(i, offset_i, j, offset_j, orientation) {
                            continue;
                        }
                        let len = common_length(p, i, offset_i, j, offset_j, orientation);
                        longest = longest.max(len);
                        // Loop order is not tuple order; compare keys.
                        let candidate = make(p, i, j, offset_i, offset_j, orientation, len);
                        if len > 0 && witness.as_ref().is_none_or(|w| len > w.length || (len == w.length && candidate.key() < w.key())) {
                            witness = Some(candidate);
                        }
                    }
                }
            }
            histogram[longest] += 1;
        }
    }
    let max_length = witness.as_ref().map_or(0, |w| w.length);
    PieceSpectrum { ell, histogram, max_length, witness }
}

/// First piece of length `>= min_len` between distinct relators `i < j`, in
/// lexicographic `(i, j, offset_i, offset_j, orientation)` order.
pub fn first_sharing_pair(p: &Presentation, min_len: usize) -> Option<PieceMatch> {
    let ell = p.ell();
    if min_len > ell {
        return None;
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            for offset_i in 0..ell {
                for offset_j in 0..ell {
                    for orientation in Orientation::BOTH {
                        let len = common_length(p, i, offset_i, j, offset_j, orientation);
                        if len >= min_len {
                            return Some(make(p, i, j, offset_i, offset_j, orientation, len));
                        }
                    }
                }
            }
        }
    }
    None
}

/// First `(relator, orientation, offset)` whose cyclic word contains `x`.
pub fn find_relator_containing(p: &Presentation, x: &[Letter]) -> Option<(usize, Orientation, usize)> {
    let ell = p.ell();
    if x.len() > ell {
        return None;
    }
    for (i, r) in p.relators().iter().enumerate() {
        for orientation in Orientation::BOTH {
            for offset in 0..ell {
                if x.iter().enumerate().all(|(k, &l)| oriented_letter(r.letters(), orientation, offset + k) == l) {
                    return Some((i, orientation, offset));
                }
            }
        }
    }
    None
}
