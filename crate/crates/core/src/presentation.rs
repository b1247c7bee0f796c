//! Density-model presentations: `(2m-1)^(d·ell)` random cyclically reduced
//! relators of length `ell`, sampled without replacement.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{self, Letter, Word};

/// Default ceiling on the number of relators a single presentation may hold.
pub const DEFAULT_RELATOR_CAP: usize = 1_000_000;

/// Rejection sampling gives up after this many draws per requested relator.
pub const REJECTION_FACTOR: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelatorDefect {
    Unparseable(String),
    NotReduced,
    NotCyclicallyReduced,
    LengthMismatch { expected: usize, found: usize },
    GeneratorOutOfRange { index: u32, m: u32 },
    Duplicate { first: usize },
}

impl fmt::Display for RelatorDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelatorDefect::Unparseable(msg) => write!(f, "relator unparseable: {msg}"),
            RelatorDefect::NotReduced => write!(f, "relator not reduced"),
            RelatorDefect::NotCyclicallyReduced => write!(f, "relator not cyclically reduced"),
            RelatorDefect::LengthMismatch { expected, found } => {
                write!(f, "relator length mismatch (expected {expected}, found {found})")
            }
            RelatorDefect::GeneratorOutOfRange { index, m } => {
                write!(f, "relator uses generator {index} but m = {m}")
            }
            RelatorDefect::Duplicate { first } => write!(f, "relator duplicates relator {first}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PresentationError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("(2m-1)^(d·ell) = {value:e} overflows 2^63; pass an explicit relator count")]
    CountOverflow { value: f64 },
    #[error("relator count {count} exceeds the configured cap {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("gave up after {attempts} draws with {found} of {target} relators: density too high for this length")]
    RejectionLimit { attempts: usize, found: usize, target: usize },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, field `{field}`: {message}")]
    Field { line: usize, field: String, message: String },
    #[error("line {line}, field `relators[{index}]`: {defect}")]
    Relator { index: usize, line: usize, defect: RelatorDefect },
}

/// Number of relators at density `d`: `(2m-1)^(d·ell)` rounded half-up.
pub fn relator_count(m: u32, ell: usize, d: f64) -> Result<u64, PresentationError> {
    if m < 2 {
        return Err(PresentationError::InvalidParameters(format!("m = {m}, need m >= 2")));
    }
    if ell == 0 {
        return Err(PresentationError::InvalidParameters("ell must be positive".into()));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(PresentationError::InvalidParameters(format!("density {d} outside [0, 1]")));
    }
    let value = f64::from(2 * m - 1).powf(d * ell as f64);
    let rounded = (value + 0.5).floor();
    if !rounded.is_finite() || rounded >= 2f64.powi(63) {
        return Err(PresentationError::CountOverflow { value });
    }
    Ok((rounded as u64).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleOptions {
    pub count_override: Option<usize>,
    pub cap: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { count_override: None, cap: DEFAULT_RELATOR_CAP }
    }
}

/// A finite presentation `<a_1..a_m | R>` with all relators of length `ell`.
///
/// Every relator is freely and cyclically reduced, uses only generators
/// `1..=m`, and relators are pairwise distinct as plain words. Coincidences
/// up to rotation or inversion are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    m: u32,
    ell: usize,
    density: f64,
    relators: Vec<Word>,
    seed: Option<u64>,
}

impl Presentation {
    pub fn new(
        m: u32,
        ell: usize,
        density: f64,
        relators: Vec<Word>,
        seed: Option<u64>,
    ) -> Result<Presentation, PresentationError> {
        check_header(m, ell, density)?;
        let mut seen = std::collections::HashMap::new();
        for (index, r) in relators.iter().enumerate() {
            if let Err(defect) = check_relator(r.letters(), m, ell) {
                return Err(PresentationError::Relator { index, line: 0, defect });
            }
            if let Some(&first) = seen.get(r) {
                return Err(PresentationError::Relator { index, line: 0, defect: RelatorDefect::Duplicate { first } });
            }
            seen.insert(r.clone(), index);
        }
        Ok(Presentation { m, ell, density, relators, seed })
    }

    /// Convenience for fixtures: relators in letter-case text.
    pub fn from_strs(m: u32, relators: &[&str]) -> Result<Presentation, PresentationError> {
        let words = relators
            .iter()
            .enumerate()
            .map(|(index, s)| {
                s.parse::<Word>().map_err(|e| PresentationError::Relator {
                    index,
                    line: 0,
                    defect: RelatorDefect::Unparseable(e.to_string()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ell = words.first().map_or(1, Word::len);
        Presentation::new(m, ell, 0.0, words, None)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator(&self, i: usize) -> &Word {
        &self.relators[i]
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    /// The same presentation with every relator replaced by its inverse.
    pub fn inverted(&self) -> Presentation {
        Presentation { relators: self.relators.iter().map(Word::inverse).collect(), ..self.clone() }
    }

    pub fn store<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        sink.write_all(self.to_json().as_bytes())?;
        sink.write_all(b"\n")
    }

    pub fn load<R: Read>(mut source: R) -> Result<Presentation, PresentationError> {
        let mut text = String::new();
        source
            .read_to_string(&mut text)
            .map_err(|e| PresentationError::Syntax { line: 0, column: 0, message: e.to_string() })?;
        Presentation::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = PresentationFile {
            m: self.m,
            ell: self.ell,
            density: self.density,
            seed: self.seed,
            relators: self.relators.iter().map(Word::to_string).collect(),
        };
        serde_json::to_string_pretty(&file).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Presentation, PresentationError> {
        let file: PresentationFile = serde_json::from_str(text).map_err(|e| PresentationError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field_line = |name: &str| key_line(text, name);
        if file.m == 0 {
            return Err(PresentationError::Field { line: field_line("m"), field: "m".into(), message: "m must be positive".into() });
        }
        if file.ell == 0 {
            return Err(PresentationError::Field { line: field_line("ell"), field: "ell".into(), message: "ell must be positive".into() });
        }
        if !(0.0..=1.0).contains(&file.density) {
            return Err(PresentationError::Field {
                line: field_line("density"),
                field: "density".into(),
                message: format!("density {} outside [0, 1]", file.density),
            });
        }
        let mut relators = Vec::with_capacity(file.relators.len());
        let mut seen = std::collections::HashMap::new();
        for (index, text_word) in file.relators.iter().enumerate() {
            let fail = |defect| PresentationError::Relator { index, line: relator_line(text, index), defect };
            let letters = words::parse_letters(text_word).map_err(|e| fail(RelatorDefect::Unparseable(e.to_string())))?;
            check_relator(&letters, file.m, file.ell).map_err(fail)?;
            let word = Word::new(letters).expect("checked reduced");
            if let Some(&first) = seen.get(&word) {
                return Err(fail(RelatorDefect::Duplicate { first }));
            }
            seen.insert(word.clone(), index);
            relators.push(word);
        }
        Ok(Presentation { m: file.m, ell: file.ell, density: file.density, relators, seed: file.seed })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    m: u32,
    ell: usize,
    density: f64,
    seed: Option<u64>,
    relators: Vec<String>,
}

fn check_header(m: u32, ell: usize, density: f64) -> Result<(), PresentationError> {
    if m == 0 || ell == 0 || !(0.0..=1.0).contains(&density) {
        return Err(PresentationError::InvalidParameters(format!("m = {m}, ell = {ell}, density = {density}")));
    }
    Ok(())
}

fn check_relator(letters: &[Letter], m: u32, ell: usize) -> Result<(), RelatorDefect> {
    if let Some(l) = letters.iter().find(|l| l.index() > m) {
        return Err(RelatorDefect::GeneratorOutOfRange { index: l.index(), m });
    }
    if !words::is_reduced(letters) {
        return Err(RelatorDefect::NotReduced);
    }
    if letters.len() != ell {
        return Err(RelatorDefect::LengthMismatch { expected: ell, found: letters.len() });
    }
    if letters.len() > 1 && letters[0].cancels(letters[letters.len() - 1]) {
        return Err(RelatorDefect::NotCyclicallyReduced);
    }
    Ok(())
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn key_line(text: &str, key: &str) -> usize {
    text.find(&format!("\"{key}\"")).map_or(0, |pos| line_of(text, pos))
}

/// Line holding the `index`-th string literal of the `relators` array.
fn relator_line(text: &str, index: usize) -> usize {
    let Some(key) = text.find("\"relators\"") else { return 0 };
    let body = key + "\"relators\"".len();
    let Some(open) = text[body..].find('[') else { return 0 };
    let mut seen = 0;
    let mut in_string = false;
    let mut escaped = false;
    for (offset, c) in text[body + open..].char_indices() {
        let pos = body + open + offset;
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
        } else if c == '"' {
            if seen == index {
                return line_of(text, pos);
            }
            seen += 1;
            in_string = true;
        } else if c == ']' {
            break;
        }
    }
    0
}

/// Samples a density-model presentation from `rng`.
///
/// Relators are uniform reduced words of length `ell`; words that are not
/// cyclically reduced and repeats of earlier draws are rejected, so the
/// result is a uniform random set of cyclically reduced words.
pub fn sample_presentation<R: Rng + ?Sized>(
    m: u32,
    ell: usize,
    d: f64,
    rng: &mut R,
    options: SampleOptions,
) -> Result<Presentation, PresentationError> {
    let target = match options.count_override {
        Some(count) => {
            if m < 2 || ell == 0 || !(0.0..=1.0).contains(&d) {
                return Err(PresentationError::InvalidParameters(format!("m = {m}, ell = {ell}, density = {d}")));
            }
            count
        }
        None => {
            let count = relator_count(m, ell, d)?;
            usize::try_from(count).map_err(|_| PresentationError::CountOverflow { value: count as f64 })?
        }
    };
    if target > options.cap {
        return Err(PresentationError::CapExceeded { count: target, cap: options.cap });
    }
    let mut seen: HashSet<Word> = HashSet::with_capacity(target);
    let mut relators = Vec::with_capacity(target);
    let limit = target.saturating_mul(REJECTION_FACTOR);
    let mut attempts = 0usize;
    while relators.len() < target {
        if attempts >= limit {
            return Err(PresentationError::RejectionLimit { attempts, found: relators.len(), target });
        }
        attempts += 1;
        let w = words::sample_reduced_word(m, ell, rng);
        if !w.is_cyclically_reduced() || seen.contains(&w) {
            continue;
        }
        seen.insert(w.clone());
        relators.push(w);
    }
    Ok(Presentation { m, ell, density: d, relators, seed: None })
}

/// Seeded sampling; the stream is `ChaCha8Rng::seed_from_u64(seed)` and the
/// seed is recorded in the result.
pub fn sample_seeded(m: u32, ell: usize, d: f64, seed: u64, options: SampleOptions) -> Result<Presentation, PresentationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = sample_presentation(m, ell, d, &mut rng, options)?;
    p.seed = Some(seed);
    Ok(p)
}
