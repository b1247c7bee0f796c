//! Letter-by-letter Dehn step search and a trace replayer that shares no
//! code with the indexed implementation.

use randgroups::dehn::{DehnStep, DehnTrace};
use randgroups::presentation::Presentation;
use randgroups::words::{oriented_letter, Letter, Orientation};

/// `(position, matched_length, relator, orientation, rotation)`.
pub type StepKey = (usize, usize, usize, Orientation, usize);

fn spells(w: &[Letter], pos: usize, len: usize, r: &[Letter], o: Orientation, rot: usize) -> bool {
    (0..len).all(|k| w[pos + k] == oriented_letter(r, o, rot + k))
}

/// Leftmost position, then longest match, then smallest
/// `(relator, orientation, rotation)`, found by trying everything.
pub fn brute_force_step(w: &[Letter], p: &Presentation) -> Option<StepKey> {
    let ell = p.ell();
    let shortest = ell / 2 + 1;
    for pos in 0..w.len() {
        let longest = (w.len() - pos).min(ell);
        for len in (shortest..=longest).rev() {
            for (i, r) in p.relators().iter().enumerate() {
                for o in Orientation::BOTH {
                    for rot in 0..ell {
                        if spells(w, pos, len, r.letters(), o, rot) {
                            return Some((pos, len, i, o, rot));
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn step_key(s: &DehnStep) -> StepKey {
    (s.position, s.matched_length, s.relator, s.orientation, s.rotation)
}

fn reduce(letters: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for l in letters {
        if out.last().is_some_and(|&t| t == l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Re-applies a non-cyclic trace: each step must spell more than half of
/// the named relator occurrence at the named position, its replacement must
/// be the inverse of the rest of that relator, and the freely reduced result
/// must be strictly shorter. Returns the final word.
pub fn replay(p: &Presentation, trace: &DehnTrace) -> Result<Vec<Letter>, String> {
    let ell = p.ell();
    let mut word = trace.input.letters().to_vec();
    for (n, s) in trace.steps.iter().enumerate() {
        if 2 * s.matched_length <= ell {
            return Err(format!("step {n}: match of {} is not more than half", s.matched_length));
        }
        let r = p.relator(s.relator).letters();
        if s.position + s.matched_length > word.len() || !spells(&word, s.position, s.matched_length, r, s.orientation, s.rotation) {
            return Err(format!("step {n}: subword does not spell the relator"));
        }
        let expected: Vec<Letter> = (0..ell - s.matched_length)
            .rev()
            .map(|k| oriented_letter(r, s.orientation, s.rotation + s.matched_length + k).inverse())
            .collect();
        if s.replacement.letters() != expected.as_slice() {
            return Err(format!("step {n}: wrong replacement"));
        }
        let mut next = word[..s.position].to_vec();
        next.extend_from_slice(&expected);
        next.extend_from_slice(&word[s.position + s.matched_length..]);
        let next = reduce(next);
        if next.len() >= word.len() {
            return Err(format!("step {n}: word did not shrink"));
        }
        word = next;
    }
    if word != trace.final_word.letters() {
        return Err("final word differs".into());
    }
    Ok(word)
}
