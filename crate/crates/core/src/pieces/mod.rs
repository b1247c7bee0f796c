//! Overlaps between relators.
//!
//! A *piece* is a common cyclic subword of two relator occurrences: relator
//! `r_i` read forward from `offset_i`, and relator `r_j` read in
//! `orientation` from `offset_j` (for [`Orientation::Inverse`] the offset
//! indexes `r_j^{-1}`). Both orientations and self-overlaps at distinct
//! positions count; the only excluded pair is an occurrence with itself.
//! Lengths are capped at `ell`, and a full-length coincidence (a rotation or
//! inverse rotation of a relator) is flagged.
//!
//! Witness ties are broken by the smallest `(i, j, offset_i, offset_j,
//! orientation)` with `Direct < Inverse`.

mod index;
pub mod oracle;

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use index::{Occurrence, RotationIndex};

use crate::presentation::Presentation;
use crate::words::{oriented_letter, Letter, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PieceMatch {
    pub i: usize,
    pub j: usize,
    pub offset_i: usize,
    pub offset_j: usize,
    pub orientation: Orientation,
    pub length: usize,
    /// The match covers a whole relator.
    pub full: bool,
}

impl PieceMatch {
    pub fn key(&self) -> (usize, usize, usize, usize, Orientation) {
        (self.i, self.j, self.offset_i, self.offset_j, self.orientation)
    }

    /// The matched subword, read along `r_i`.
    pub fn word(&self, p: &Presentation) -> Vec<Letter> {
        crate::words::cyclic_subword(p.relator(self.i).letters(), Orientation::Direct, self.offset_i, self.length)
    }

    /// The same piece truncated to its first `len` letters.
    pub fn truncated(&self, len: usize, ell: usize) -> PieceMatch {
        let length = self.length.min(len);
        PieceMatch { length, full: length == ell, ..*self }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("piece match serializes")
    }
}

/// Distribution of piece lengths over relator positions.
///
/// `histogram[L]` counts the positions `(i, offset)` of the relators whose
/// longest piece starting there has length exactly `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceSpectrum {
    pub ell: usize,
    pub histogram: Vec<u64>,
    pub max_length: usize,
    /// Smallest witness of `max_length`; absent when no two positions share a letter.
    pub witness: Option<PieceMatch>,
}

impl PieceSpectrum {
    /// `length,count` rows for every length that occurs.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,count\n");
        for (len, &count) in self.histogram.iter().enumerate() {
            if count > 0 {
                let _ = writeln!(out, "{len},{count}");
            }
        }
        out
    }
}

/// Longest piece between relators `i` and `j`.
///
/// Dynamic programming over the doubled words: `lcp[a][b]` is the common
/// prefix of `r_i r_i` from `a` and `s s` from `b`, where `s` is `r_j` or
/// `r_j^{-1}`. Rows are computed from the end so only two are kept.
pub fn max_common_piece(p: &Presentation, i: usize, j: usize) -> PieceMatch {
    let ell = p.ell();
    let a: Vec<Letter> = (0..2 * ell).map(|k| oriented_letter(p.relator(i).letters(), Orientation::Direct, k)).collect();
    let mut best: Option<PieceMatch> = None;
    for orientation in Orientation::BOTH {
        let b: Vec<Letter> = (0..2 * ell).map(|k| oriented_letter(p.relator(j).letters(), orientation, k)).collect();
        let mut next_row = vec![0usize; 2 * ell + 1];
        let mut row = vec![0usize; 2 * ell + 1];
        for x in (0..2 * ell).rev() {
            for y in (0..2 * ell).rev() {
                row[y] = if a[x] == b[y] { next_row[y + 1] + 1 } else { 0 };
            }
            if x < ell {
                for (y, &raw) in row.iter().enumerate().take(ell) {
                    if i == j && x == y && orientation == Orientation::Direct {
                        continue;
                    }
                    let length = raw.min(ell);
                    let candidate = PieceMatch { i, j, offset_i: x, offset_j: y, orientation, length, full: length == ell };
                    let better = match &best {
                        None => true,
                        Some(b) => length > b.length || (length == b.length && candidate.key() < b.key()),
                    };
                    if better {
                        best = Some(candidate);
                    }
                }
            }
            std::mem::swap(&mut row, &mut next_row);
        }
    }
    best.expect("relators are nonempty")
}

/// Position spectrum plus the global maximum, from the rotation index.
pub fn piece_spectrum(index: &RotationIndex<'_>) -> PieceSpectrum {
    let ell = index.ell();
    let n = index.len();
    let mut histogram = vec![0u64; ell + 1];
    for k in 0..n {
        if index.entry(k).orientation != Orientation::Direct {
            continue;
        }
        let before = index.adjacent_lcp(k);
        let after = if k + 1 < n { index.adjacent_lcp(k + 1) } else { 0 };
        histogram[before.max(after)] += 1;
    }
    let max_length = histogram.iter().rposition(|&c| c > 0).unwrap_or(0);
    let witness = if max_length == 0 {
        None
    } else {
        index.runs(max_length).into_iter().filter_map(|run| run_witness(index, run, max_length)).min_by_key(PieceMatch::key)
    };
    PieceSpectrum { ell, histogram, max_length, witness }
}

/// Smallest ordered pair inside one run of rotations sharing `length` letters.
fn run_witness(index: &RotationIndex<'_>, run: std::ops::Range<usize>, length: usize) -> Option<PieceMatch> {
    let mut members: Vec<Occurrence> = run.map(|k| index.entry(k)).collect();
    members.sort_by_key(|o| (o.relator, o.offset, o.orientation));
    let i = members.iter().filter(|o| o.orientation == Orientation::Direct).map(|o| o.relator).min()?;
    let ell = index.ell();
    members
        .iter()
        .filter(|a| a.orientation == Orientation::Direct && a.relator == i)
        .filter_map(|a| {
            let b = members.iter().find(|b| *b != a)?;
            Some(PieceMatch {
                i,
                j: b.relator,
                offset_i: a.offset,
                offset_j: b.offset,
                orientation: b.orientation,
                length,
                full: length == ell,
            })
        })
        .min_by_key(PieceMatch::key)
}

/// Outcome of a `C'(lambda)` test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallCancellationReport {
    pub lambda: Ratio<u64>,
    pub holds: bool,
    pub max_length: usize,
    pub worst: Option<PieceMatch>,
}

/// `C'(lambda)`: every piece is strictly shorter than `lambda·ell`.
pub fn small_cancellation_check(index: &RotationIndex<'_>, lambda: Ratio<u64>) -> SmallCancellationReport {
    assert!(*lambda.numer() > 0 && lambda <= Ratio::from_integer(1), "lambda must lie in (0, 1]");
    let spectrum = piece_spectrum(index);
    let ell = index.ell() as u64;
    let holds = (spectrum.max_length as u64) * lambda.denom() < lambda.numer() * ell;
    SmallCancellationReport { lambda, holds, max_length: spectrum.max_length, worst: spectrum.witness }
}

/// One candidate per block of rotations sharing at least `min_len` letters:
/// the smallest `(i, j, offset_i, offset_j, orientation)` with `i < j` in it.
/// Sorted by that key and deduplicated on `(i, j)`.
pub fn sharing_candidates(index: &RotationIndex<'_>, min_len: usize) -> Vec<PieceMatch> {
    let ell = index.ell();
    if min_len > ell || min_len == 0 {
        return Vec::new();
    }
    let mut out: Vec<PieceMatch> = index
        .runs(min_len)
        .into_iter()
        .filter_map(|run| {
            let members: Vec<Occurrence> = run.map(|k| index.entry(k)).collect();
            let max_rel = members.iter().map(|o| o.relator).max()?;
            let i = members.iter().filter(|o| o.orientation == Orientation::Direct && o.relator < max_rel).map(|o| o.relator).min()?;
            let j = members.iter().filter(|o| o.relator > i).map(|o| o.relator).min()?;
            let a = members.iter().filter(|o| o.orientation == Orientation::Direct && o.relator == i).min_by_key(|o| o.offset)?;
            let b = members.iter().filter(|o| o.relator == j).min_by_key(|o| (o.offset, o.orientation))?;
            let length = index.common_length(*a, *b);
            Some(PieceMatch {
                i,
                j,
                offset_i: a.offset,
                offset_j: b.offset,
                orientation: b.orientation,
                length,
                full: length == ell,
            })
        })
        .collect();
    out.sort_by_key(PieceMatch::key);
    out.dedup_by_key(|m| (m.i, m.j));
    out
}

/// First piece of length `>= min_len` between two distinct relators, in scan
/// order `(i, j, offset_i, offset_j, orientation)` with `i < j`.
pub fn find_sharing_pair(index: &RotationIndex<'_>, min_len: usize) -> Option<PieceMatch> {
    sharing_candidates(index, min_len).into_iter().next()
}

/// Where a word sits inside a relator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Containment {
    pub relator: usize,
    pub orientation: Orientation,
    pub offset: usize,
    /// `x` is a whole rotation of the relator (or of its inverse).
    pub full: bool,
}

/// First relator (then `Direct` before `Inverse`, then smallest offset) whose
/// cyclic word contains `x`. Linear scan with KMP over each doubled relator.
pub fn find_relator_containing(p: &Presentation, x: &[Letter]) -> Option<Containment> {
    let ell = p.ell();
    if x.len() > ell {
        return None;
    }
    let failure = kmp_failure(x);
    for (relator, r) in p.relators().iter().enumerate() {
        for orientation in Orientation::BOTH {
            if let Some(offset) = kmp_first_cyclic(r.letters(), orientation, x, &failure) {
                return Some(Containment { relator, orientation, offset, full: x.len() == ell });
            }
        }
    }
    None
}

fn kmp_failure(x: &[Letter]) -> Vec<usize> {
    let mut fail = vec![0usize; x.len()];
    let mut k = 0;
    for q in 1..x.len() {
        while k > 0 && x[q] != x[k] {
            k = fail[k - 1];
        }
        if x[q] == x[k] {
            k += 1;
        }
        fail[q] = k;
    }
    fail
}

/// Smallest start `< ell` of `x` in the doubled oriented relator.
fn kmp_first_cyclic(r: &[Letter], orientation: Orientation, x: &[Letter], fail: &[usize]) -> Option<usize> {
    let ell = r.len();
    if x.is_empty() {
        return Some(0);
    }
    let mut k = 0;
    for t in 0..ell + x.len() - 1 {
        let c = oriented_letter(r, orientation, t);
        while k > 0 && c != x[k] {
            k = fail[k - 1];
        }
        if c == x[k] {
            k += 1;
        }
        if k == x.len() {
            return Some(t + 1 - x.len());
        }
    }
    None
}
