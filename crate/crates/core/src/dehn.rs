//! Dehn's algorithm on words and Greendlinger-type checks on diagrams.
//!
//! A Dehn step finds a subword that spells more than half of a cyclic
//! relator occurrence and replaces it by the inverse of the rest of that
//! relator, which is strictly shorter. Matches are looked up in the sorted
//! rotation index of the presentation.

use std::fmt::{self, Write as _};
use std::ops::Range;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{face_boundary_stats, Diagram};
use crate::pieces::{Occurrence, RotationIndex};
use crate::presentation::Presentation;
use crate::words::{cyclic_reduce, cyclic_subword, free_reduce, invert, sample_reduced_word, Letter, Orientation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DehnError {
    #[error("Greendlinger's lemma needs at least two faces, diagram has {0}")]
    TooFewFaces(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnStep {
    /// Start of the match in the current word.
    pub position: usize,
    pub relator: usize,
    pub orientation: Orientation,
    /// Offset of the match in the relator read in `orientation`.
    pub rotation: usize,
    pub matched_length: usize,
    pub replacement: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnTrace {
    pub input: Word,
    /// Matches may wrap around the end of a cyclically reduced word.
    pub cyclic: bool,
    pub steps: Vec<DehnStep>,
    pub final_word: Word,
}

impl DehnTrace {
    pub fn succeeded(&self) -> bool {
        self.final_word.is_empty()
    }

    /// `input,<word>`, then `step,position,relator,orientation,rotation,matched_length,replacement`
    /// per step, then `final,<word>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input,{}", self.input);
        for s in &self.steps {
            let _ = writeln!(
                out,
                "step,{},{},{},{},{},{}",
                s.position,
                s.relator,
                s.orientation.sign(),
                s.rotation,
                s.matched_length,
                s.replacement
            );
        }
        let _ = writeln!(out, "final,{}", self.final_word);
        out
    }
}

impl fmt::Display for DehnTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Lookup structure for Dehn steps over one presentation.
pub struct DehnIndex<'p> {
    index: RotationIndex<'p>,
    /// Shortest admissible match, `⌊ℓ/2⌋ + 1`.
    min_match: usize,
}

impl<'p> DehnIndex<'p> {
    pub fn new(p: &'p Presentation) -> DehnIndex<'p> {
        DehnIndex { index: RotationIndex::new(p), min_match: p.ell() / 2 + 1 }
    }

    pub fn min_match(&self) -> usize {
        self.min_match
    }

    fn longest_at(&self, letters: &[Letter], pos: usize, cyclic: bool) -> Option<(usize, Range<usize>)> {
        let n = letters.len();
        let limit = if cyclic { n.min(self.index.ell()) } else { (n - pos).min(self.index.ell()) };
        if limit < self.min_match {
            return None;
        }
        let mut range = 0..self.index.len();
        let mut best = None;
        for depth in 0..limit {
            let code = letters[(pos + depth) % n].code() as u16;
            range = self.index.narrow(range, depth, code);
            if range.is_empty() {
                break;
            }
            if depth + 1 >= self.min_match {
                best = Some((depth + 1, range.clone()));
            }
        }
        best
    }

    /// Leftmost match; then longest; then smallest `(relator, orientation, rotation)`.
    pub fn step(&self, w: &Word, cyclic: bool) -> Option<DehnStep> {
        let letters = w.letters();
        let ell = self.index.ell();
        (0..letters.len()).find_map(|pos| {
            let (len, range) = self.longest_at(letters, pos, cyclic)?;
            let occ: Occurrence = range.map(|k| self.index.entry(k)).min().expect("range is nonempty");
            let r = self.index.presentation().relator(occ.relator).letters();
            let rest = cyclic_subword(r, occ.orientation, occ.offset + len, ell - len);
            Some(DehnStep {
                position: pos,
                relator: occ.relator,
                orientation: occ.orientation,
                rotation: occ.offset,
                matched_length: len,
                replacement: invert(&free_reduce(rest)),
            })
        })
    }

    pub fn reduce(&self, w: &Word, cyclic: bool) -> DehnTrace {
        let mut current = if cyclic { cyclic_reduce(w) } else { w.clone() };
        let mut steps = Vec::new();
        while let Some(step) = self.step(&current, cyclic) {
            current = apply_step(&current, &step, cyclic);
            steps.push(step);
        }
        DehnTrace { input: w.clone(), cyclic, steps, final_word: current }
    }
}

fn apply_step(w: &Word, step: &DehnStep, cyclic: bool) -> Word {
    let letters = w.letters();
    let n = letters.len();
    if cyclic {
        let tail = (step.position + step.matched_length..step.position + n).map(|k| letters[k % n]);
        let raw: Vec<Letter> = step.replacement.letters().iter().copied().chain(tail).collect();
        cyclic_reduce(&free_reduce(raw))
    } else {
        let raw = letters[..step.position]
            .iter()
            .chain(step.replacement.letters())
            .chain(&letters[step.position + step.matched_length..])
            .copied();
        free_reduce(raw)
    }
}

/// One Dehn step on `w` (builds the index for `p`).
pub fn dehn_step(w: &Word, p: &Presentation) -> Option<DehnStep> {
    DehnIndex::new(p).step(w, false)
}

/// Dehn's algorithm on `w` as written (builds the index for `p`).
pub fn dehn_reduce(w: &Word, p: &Presentation) -> DehnTrace {
    DehnIndex::new(p).reduce(w, false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreendlingerReport {
    /// `ℓ/2 + (ℓ/2)(1 − 5d − ε)`.
    pub threshold: f64,
    /// The larger of `threshold` and `ℓ/2`; runs must exceed it.
    pub effective_threshold: f64,
    /// `ℓ(1 − 5d/2 − ε)`, compared with total boundary edges.
    pub weak_threshold: f64,
    /// Faces whose longest boundary run exceeds `effective_threshold`.
    pub long_run_faces: Vec<usize>,
    /// Faces whose boundary edges, consecutive or not, exceed `weak_threshold`.
    pub weak_faces: Vec<usize>,
    pub holds: bool,
}

/// At least two faces have more than `max(ℓ/2, ℓ/2 + (ℓ/2)(1 − 5d − ε))`
/// consecutive boundary edges.
pub fn greendlinger_check(diagram: &Diagram, d: f64, eps: f64) -> Result<GreendlingerReport, DehnError> {
    if diagram.face_count() < 2 {
        return Err(DehnError::TooFewFaces(diagram.face_count()));
    }
    let ell = diagram.ell() as f64;
    let threshold = ell / 2.0 + ell / 2.0 * (1.0 - 5.0 * d - eps);
    let effective_threshold = threshold.max(ell / 2.0);
    let weak_threshold = ell * (1.0 - 5.0 * d / 2.0 - eps);
    let stats = face_boundary_stats(diagram);
    let exceeds = |x: usize, t: f64| x as f64 > t + crate::rounding::TOLERANCE;
    let long_run_faces: Vec<usize> =
        (0..stats.len()).filter(|&f| exceeds(stats[f].max_consecutive_run, effective_threshold)).collect();
    let weak_faces = (0..stats.len()).filter(|&f| exceeds(stats[f].total_boundary_edges, weak_threshold)).collect();
    Ok(GreendlingerReport {
        threshold,
        effective_threshold,
        weak_threshold,
        holds: long_run_faces.len() >= 2,
        long_run_faces,
        weak_faces,
    })
}

/// Free reduction of `k` conjugates `g r^{±1} g^{-1}`, each with a uniform
/// relator, sign, and reduced `g` of uniform length in `0..=ℓ`.
pub fn random_trivial_word<R: Rng + ?Sized>(p: &Presentation, k: usize, rng: &mut R) -> Word {
    let mut raw: Vec<Letter> = Vec::new();
    for _ in 0..k {
        let r = p.relator(rng.gen_range(0..p.len()));
        let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
        let g = sample_reduced_word(p.m(), rng.gen_range(0..=p.ell()), rng);
        raw.extend_from_slice(g.letters());
        raw.extend_from_slice(r.letters());
        raw.extend(g.inverse().letters());
    }
    free_reduce(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::glue_two_relators;
    use crate::pieces::PieceMatch;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pres() -> Presentation {
        Presentation::from_strs(2, &["aabbab", "abABBa"]).unwrap()
    }

    #[test]
    fn relator_reduces_in_one_step() {
        let p = pres();
        let trace = dehn_reduce(&w("aabbab"), &p);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].matched_length, 6);
        assert!(trace.steps[0].replacement.is_empty());
        assert!(trace.succeeded());
    }

    #[test]
    fn short_words_have_no_step() {
        let p = pres();
        assert!(dehn_step(&w("a"), &p).is_none());
        assert!(dehn_reduce(&Word::empty(), &p).steps.is_empty());
    }

    #[test]
    fn partial_match_is_replaced_by_complement() {
        let p = pres();
        // "aabb" is 4 > 3 letters of aabbab; the rest "ab" inverts to "BA".
        let step = dehn_step(&w("aabb"), &p).unwrap();
        assert_eq!((step.position, step.relator, step.rotation, step.matched_length), (0, 0, 0, 4));
        assert_eq!(step.replacement.to_string(), "BA");
        let trace = dehn_reduce(&w("aabb"), &p);
        assert_eq!(trace.final_word.to_string(), "BA");
        let text = trace.to_text();
        assert!(text.starts_with("input,aabb\nstep,0,0,1,0,4,BA\n"), "{text}");
    }

    #[test]
    fn cyclic_mode_finds_wrapping_matches() {
        let p = pres();
        // Read cyclically, "bbaaa" contains "aabba" from aabbab across its end.
        let word = w("bbaaa");
        let index = DehnIndex::new(&p);
        assert!(index.step(&word, false).is_none());
        let step = index.step(&word, true).unwrap();
        assert_eq!((step.position, step.matched_length), (3, 5));
        assert_eq!(index.reduce(&word, true).final_word.to_string(), "B");
    }

    #[test]
    fn random_trivial_words() {
        let p = pres();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(random_trivial_word(&p, 0, &mut rng).is_empty());
        for _ in 0..20 {
            let word = random_trivial_word(&p, 2, &mut rng);
            assert!(crate::words::is_reduced(word.letters()));
        }
    }

    #[test]
    fn greendlinger_on_two_faces() {
        let p = pres();
        let m = PieceMatch { i: 0, j: 1, offset_i: 1, offset_j: 0, orientation: Orientation::Direct, length: 2, full: false };
        let d = glue_two_relators(&p, &m).unwrap();
        // Runs of 4 against ℓ/2 + (ℓ/2)(1 − 0.5 − 0.05) = 4.35.
        let report = greendlinger_check(&d, 0.1, 0.05).unwrap();
        assert!(!report.holds);
        let report = greendlinger_check(&d, 0.15, 0.05).unwrap();
        assert!(report.holds, "{report:?}");
        let single = Diagram::single_face(&p, 0, Orientation::Direct, 0);
        assert_eq!(greendlinger_check(&single, 0.1, 0.05), Err(DehnError::TooFewFaces(1)));
    }

    #[test]
    fn threshold_at_one_fifth_is_half() {
        let p = pres();
        let m = PieceMatch { i: 0, j: 1, offset_i: 1, offset_j: 0, orientation: Orientation::Direct, length: 2, full: false };
        let d = glue_two_relators(&p, &m).unwrap();
        let report = greendlinger_check(&d, 0.2, 0.0).unwrap();
        assert!((report.threshold - 3.0).abs() < 1e-12);
    }
}
