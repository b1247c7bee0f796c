//! Letters, freely reduced words and the operations presentations need on them.
//!
//! Generator `i` is written as the `i`-th lowercase letter and its inverse as
//! the matching uppercase letter. Generators beyond 26 use the numeric tokens
//! `g27` / `G27`; a `g` or `G` immediately followed by digits is always read as
//! a numeric token, so the two encodings never collide.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected character {found:?} at position {position}")]
    BadCharacter { position: usize, found: char },
    #[error("generator index 0 at position {position}")]
    ZeroGenerator { position: usize },
    #[error("word is not freely reduced at position {position}")]
    NotReduced { position: usize },
    #[error("generator count m must be at least 1")]
    NoGenerators,
}

/// A generator or its inverse. Stored as a nonzero signed index: `+i` is the
/// generator `a_i`, `-i` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    /// The generator `a_index` (1-based).
    pub fn generator(index: u32) -> Letter {
        assert!(index >= 1 && index <= i32::MAX as u32, "generator index out of range");
        Letter(index as i32)
    }

    /// The inverse generator `a_index^{-1}` (1-based).
    pub fn inverse_generator(index: u32) -> Letter {
        Letter::generator(index).inverse()
    }

    pub fn new(index: u32, sign: i8) -> Letter {
        match sign {
            1 => Letter::generator(index),
            -1 => Letter::inverse_generator(index),
            _ => panic!("letter sign must be +1 or -1, got {sign}"),
        }
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn sign(self) -> i8 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.0 == -other.0
    }

    /// Dense code in `0..2m`: `a_i` maps to `2(i-1)`, its inverse to `2(i-1)+1`.
    /// Ordering words by these codes is the content order used by the indexes.
    pub fn code(self) -> u32 {
        2 * (self.index() - 1) + u32::from(self.is_inverse())
    }

    pub fn from_code(code: u32) -> Letter {
        let index = code / 2 + 1;
        if code.is_multiple_of(2) {
            Letter::generator(index)
        } else {
            Letter::inverse_generator(index)
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let index = self.index();
        if index <= 26 {
            let base = if self.is_inverse() { b'A' } else { b'a' };
            write!(f, "{}", (base + (index - 1) as u8) as char)
        } else if self.is_inverse() {
            write!(f, "G{index}")
        } else {
            write!(f, "g{index}")
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Direction in which a relator is read: as written, or as its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Orientation {
    Direct,
    Inverse,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Direct, Orientation::Inverse];

    pub fn sign(self) -> i8 {
        match self {
            Orientation::Direct => 1,
            Orientation::Inverse => -1,
        }
    }

    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Direct => Orientation::Inverse,
            Orientation::Inverse => Orientation::Direct,
        }
    }
}

impl From<Orientation> for i8 {
    fn from(o: Orientation) -> i8 {
        o.sign()
    }
}

impl TryFrom<i8> for Orientation {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Orientation::Direct),
            -1 => Ok(Orientation::Inverse),
            _ => Err(format!("orientation must be 1 or -1, got {v}")),
        }
    }
}

/// Letter `i` (taken mod `w.len()`) of the cyclic word `w` read in `orientation`.
/// For [`Orientation::Inverse`] this indexes the inverse word `w^{-1}`.
pub fn oriented_letter(w: &[Letter], orientation: Orientation, i: usize) -> Letter {
    let n = w.len();
    match orientation {
        Orientation::Direct => w[i % n],
        Orientation::Inverse => w[n - 1 - i % n].inverse(),
    }
}

/// Cyclic subword of `w` (read in `orientation`) starting at `offset`.
pub fn cyclic_subword(w: &[Letter], orientation: Orientation, offset: usize, len: usize) -> Vec<Letter> {
    (0..len).map(|k| oriented_letter(w, orientation, offset + k)).collect()
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Wraps `letters`, failing if they are not freely reduced.
    pub fn new(letters: Vec<Letter>) -> Result<Word, WordError> {
        match first_cancellation(&letters) {
            Some(position) => Err(WordError::NotReduced { position }),
            None => Ok(Word(letters)),
        }
    }

    /// Parses the letter-case encoding and freely reduces the result.
    pub fn parse_reducing(s: &str) -> Result<Word, WordError> {
        Ok(free_reduce(parse_letters(s)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => self.0.len() == 1 || !a.cancels(b),
            _ => true,
        }
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    /// Free product `self · other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.to_string())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Strict parse: the text must already spell a freely reduced word.
    fn from_str(s: &str) -> Result<Word, WordError> {
        Word::new(parse_letters(s)?)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reads the letter-case encoding without reducing.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>, WordError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::with_capacity(chars.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let numeric = (c == 'g' || c == 'G') && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
        if numeric {
            let start = i;
            let mut j = i + 1;
            let mut index: u64 = 0;
            while j < chars.len() && chars[j].is_ascii_digit() {
                index = index * 10 + u64::from(chars[j].to_digit(10).unwrap_or(0));
                if index > i32::MAX as u64 {
                    return Err(WordError::BadCharacter { position: j, found: chars[j] });
                }
                j += 1;
            }
            if index == 0 {
                return Err(WordError::ZeroGenerator { position: start });
            }
            let sign = if c == 'g' { 1 } else { -1 };
            out.push(Letter::new(index as u32, sign));
            i = j;
        } else if c.is_ascii_lowercase() {
            out.push(Letter::generator(c as u32 - 'a' as u32 + 1));
            i += 1;
        } else if c.is_ascii_uppercase() {
            out.push(Letter::inverse_generator(c as u32 - 'A' as u32 + 1));
            i += 1;
        } else {
            return Err(WordError::BadCharacter { position: i, found: c });
        }
    }
    Ok(out)
}

fn first_cancellation(letters: &[Letter]) -> Option<usize> {
    letters.windows(2).position(|p| p[0].cancels(p[1]))
}

pub fn is_reduced(letters: &[Letter]) -> bool {
    first_cancellation(letters).is_none()
}

/// Iterated cancellation of adjacent inverse pairs (a single stack pass).
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for l in raw {
        if stack.last().is_some_and(|&top| top.cancels(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    Word(stack)
}

/// Strips mutually inverse first/last letters until none remain.
pub fn cyclic_reduce(w: &Word) -> Word {
    let letters = w.letters();
    let (mut lo, mut hi) = (0, letters.len());
    while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    Word(letters[lo..hi].to_vec())
}

pub fn invert(w: &Word) -> Word {
    Word(w.0.iter().rev().map(|l| l.inverse()).collect())
}

/// Number of reduced words of length `ell` over `m` generators: `2m(2m-1)^(ell-1)`,
/// and 1 for the empty word.
pub fn count_reduced_words(m: u32, ell: u32) -> Result<BigUint, WordError> {
    if m == 0 {
        return Err(WordError::NoGenerators);
    }
    if ell == 0 {
        return Ok(BigUint::from(1u32));
    }
    let m = BigUint::from(m);
    let two_m = &m * 2u32;
    let branch = &two_m - 1u32;
    Ok(two_m * branch.pow(ell - 1))
}

/// Uniform reduced word of length `ell`: the first letter is uniform over the
/// `2m` letters, each later letter uniform over the `2m-1` letters that do not
/// cancel its predecessor.
pub fn sample_reduced_word<R: Rng + ?Sized>(m: u32, ell: usize, rng: &mut R) -> Word {
    assert!(m >= 1, "need at least one generator");
    let alphabet = 2 * m;
    let mut letters: Vec<Letter> = Vec::with_capacity(ell);
    for k in 0..ell {
        let letter = if k == 0 {
            Letter::from_code(rng.gen_range(0..alphabet))
        } else {
            let forbidden = letters[k - 1].inverse().code();
            let mut code = rng.gen_range(0..alphabet - 1);
            if code >= forbidden {
                code += 1;
            }
            Letter::from_code(code)
        };
        letters.push(letter);
    }
    Word(letters)
}
