//! Sorted index of every rotation of every relator and of its inverse.
//!
//! This is a suffix array over the doubled relators `r r` and `r^{-1} r^{-1}`
//! restricted to the `ell` starting positions of each, with suffixes cut at
//! length `ell`. Any cyclic subword of length at most `ell` is then a prefix
//! of some rotation, so its occurrences form one contiguous range, and the
//! longest common cyclic subwords between occurrences show up as common
//! prefixes of neighbouring entries.

use std::cmp::Ordering;
use std::ops::Range;

use rayon::prelude::*;

use crate::presentation::Presentation;
use crate::words::{Letter, Orientation};

/// One cyclic position in a relator read in a given orientation. For
/// [`Orientation::Inverse`], `offset` indexes the inverse word `r^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub relator: usize,
    pub orientation: Orientation,
    pub offset: usize,
}

const ORIENT_BIT: u64 = 1 << 31;

fn pack(relator: usize, orientation: Orientation, offset: usize) -> u64 {
    let o = if orientation == Orientation::Inverse { ORIENT_BIT } else { 0 };
    ((relator as u64) << 32) | o | offset as u64
}

fn unpack(e: u64) -> Occurrence {
    Occurrence {
        relator: (e >> 32) as usize,
        orientation: if e & ORIENT_BIT != 0 { Orientation::Inverse } else { Orientation::Direct },
        offset: (e & (ORIENT_BIT - 1)) as usize,
    }
}

pub struct RotationIndex<'p> {
    presentation: &'p Presentation,
    ell: usize,
    /// Block `2r + o` holds the doubled word of relator `r` in orientation `o`.
    codes: Vec<u16>,
    entries: Vec<u64>,
    /// `adjacent_lcp[k]` is the common prefix of entries `k-1` and `k` (0 for `k = 0`).
    adjacent_lcp: Vec<u32>,
}

impl<'p> RotationIndex<'p> {
    pub fn new(presentation: &'p Presentation) -> RotationIndex<'p> {
        let ell = presentation.ell();
        assert!(presentation.m() <= 1 << 15, "letter codes must fit in 16 bits");
        assert!(ell < ORIENT_BIT as usize, "relator length too large for the index");
        let n = presentation.len();
        let mut codes = Vec::with_capacity(n * 4 * ell);
        for r in presentation.relators() {
            for orientation in Orientation::BOTH {
                for k in 0..2 * ell {
                    codes.push(crate::words::oriented_letter(r.letters(), orientation, k).code() as u16);
                }
            }
        }

        let alphabet = 2 * presentation.m();
        let bits = (32 - (alphabet - 1).leading_zeros()).max(1) as usize;
        let key_len = ell.min(64 / bits);
        let mut keyed: Vec<(u64, u64)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|r| {
                let codes = &codes;
                Orientation::BOTH.into_iter().flat_map(move |o| {
                    (0..ell).map(move |off| {
                        let e = pack(r, o, off);
                        let start = block_start(ell, r, o) + off;
                        let mut key = 0u64;
                        for &c in &codes[start..start + key_len] {
                            key = (key << bits) | u64::from(c);
                        }
                        (key, e)
                    })
                })
            })
            .collect();
        let full_compare = key_len < ell;
        keyed.par_sort_unstable_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| {
                    if full_compare {
                        rotation_of(&codes, ell, a.1).cmp(rotation_of(&codes, ell, b.1))
                    } else {
                        Ordering::Equal
                    }
                })
                .then(a.1.cmp(&b.1))
        });
        let entries: Vec<u64> = keyed.into_iter().map(|(_, e)| e).collect();
        let adjacent_lcp = (0..entries.len())
            .into_par_iter()
            .map(|k| {
                if k == 0 {
                    0
                } else {
                    common_prefix(rotation_of(&codes, ell, entries[k - 1]), rotation_of(&codes, ell, entries[k])) as u32
                }
            })
            .collect();
        RotationIndex { presentation, ell, codes, entries, adjacent_lcp }
    }

    pub fn presentation(&self) -> &'p Presentation {
        self.presentation
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, k: usize) -> Occurrence {
        unpack(self.entries[k])
    }

    pub fn adjacent_lcp(&self, k: usize) -> usize {
        self.adjacent_lcp[k] as usize
    }

    /// The `ell` letter codes of a rotation, as stored.
    pub(crate) fn rotation_codes(&self, occ: Occurrence) -> &[u16] {
        let start = block_start(self.ell, occ.relator, occ.orientation) + occ.offset;
        &self.codes[start..start + self.ell]
    }

    /// Cyclic common prefix of two occurrences, capped at `ell`.
    pub fn common_length(&self, a: Occurrence, b: Occurrence) -> usize {
        common_prefix(self.rotation_codes(a), self.rotation_codes(b))
    }

    /// Index range of the rotations that start with `pattern` (`|pattern| <= ell`).
    pub fn range(&self, pattern: &[Letter]) -> Range<usize> {
        if pattern.len() > self.ell {
            return 0..0;
        }
        let pat: Vec<u16> = pattern.iter().map(|l| l.code() as u16).collect();
        self.range_codes(&pat)
    }

    pub(crate) fn range_codes(&self, pat: &[u16]) -> Range<usize> {
        let len = pat.len();
        let prefix = |e: &u64| &rotation_of(&self.codes, self.ell, *e)[..len];
        let lo = self.entries.partition_point(|e| prefix(e) < pat);
        let hi = lo + self.entries[lo..].partition_point(|e| prefix(e) <= pat);
        lo..hi
    }

    /// Sub-range of `range` whose letter at `depth` has `code`, given that all
    /// entries of `range` agree on their first `depth` letters.
    pub(crate) fn narrow(&self, range: Range<usize>, depth: usize, code: u16) -> Range<usize> {
        if depth >= self.ell {
            return range.start..range.start;
        }
        let slice = &self.entries[range.clone()];
        let letter = |e: &u64| rotation_of(&self.codes, self.ell, *e)[depth];
        let lo = slice.partition_point(|e| letter(e) < code);
        let hi = lo + slice[lo..].partition_point(|e| letter(e) <= code);
        range.start + lo..range.start + hi
    }

    /// All occurrences of `pattern` as a cyclic subword, in index order.
    pub fn occurrences(&self, pattern: &[Letter]) -> impl Iterator<Item = Occurrence> + '_ {
        self.range(pattern).map(move |k| self.entry(k))
    }

    /// Maximal blocks `[start, end)` of at least two entries whose adjacent
    /// common prefixes are all `>= min_len`.
    pub fn runs(&self, min_len: usize) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.entries.len() {
            let continues = k < self.entries.len() && self.adjacent_lcp[k] as usize >= min_len;
            if !continues {
                if k - start >= 2 {
                    out.push(start..k);
                }
                start = k;
            }
        }
        out
    }
}

fn block_start(ell: usize, relator: usize, orientation: Orientation) -> usize {
    let o = usize::from(orientation == Orientation::Inverse);
    (2 * relator + o) * 2 * ell
}

fn rotation_of(codes: &[u16], ell: usize, e: u64) -> &[u16] {
    let occ = unpack(e);
    let start = block_start(ell, occ.relator, occ.orientation) + occ.offset;
    &codes[start..start + ell]
}

fn common_prefix(a: &[u16], b: &[u16]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}
