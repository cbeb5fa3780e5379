//! Singular braid words: parsing, formatting, statistics, resolutions and
//! Markov moves.
//!
//! Text grammar, whitespace separated:
//!
//! ```text
//! word   := ["n=" k] token*
//! token  := ("s" i ["'"] | "t" i) ["^" k]
//! ```
//!
//! `s<i>` is the positive crossing σ_i, `s<i>'` its inverse and `t<i>` the
//! singular generator τ_i. Indices are 1-based.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Pos(usize),
    Neg(usize),
    Sing(usize),
}

impl Letter {
    pub fn index(self) -> usize {
        match self {
            Letter::Pos(i) | Letter::Neg(i) | Letter::Sing(i) => i,
        }
    }

    pub fn is_singular(self) -> bool {
        matches!(self, Letter::Sing(_))
    }

    /// Group inverse, undefined for singular letters.
    pub fn inverse(self) -> Option<Letter> {
        match self {
            Letter::Pos(i) => Some(Letter::Neg(i)),
            Letter::Neg(i) => Some(Letter::Pos(i)),
            Letter::Sing(_) => None,
        }
    }

    fn with_index(self, i: usize) -> Letter {
        match self {
            Letter::Pos(_) => Letter::Pos(i),
            Letter::Neg(_) => Letter::Neg(i),
            Letter::Sing(_) => Letter::Sing(i),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Pos(i) => write!(f, "s{i}"),
            Letter::Neg(i) => write!(f, "s{i}'"),
            Letter::Sing(i) => write!(f, "t{i}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand count {given} conflicts with n={declared} in the word")]
    StrandConflict { given: usize, declared: usize },
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("singular letter {0} cannot be used as a conjugator")]
    SingularConjugator(Letter),
}

/// A word in the singular braid monoid on `strands` strands.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

/// Sign of a stabilization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for l in &letters {
            let i = l.index();
            if i == 0 || i >= strands {
                return Err(BraidError::IndexOutOfRange { index: i, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Self {
        BraidWord {
            strands: strands.max(1),
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of singular letters.
    pub fn degree(&self) -> usize {
        self.letters.iter().filter(|l| l.is_singular()).count()
    }

    /// Exponent sum: +1 per positive crossing, -1 per negative one.
    pub fn epsilon(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Pos(_) => 1,
                Letter::Neg(_) => -1,
                Letter::Sing(_) => 0,
            })
            .sum()
    }

    pub fn inferred_strands(letters: &[Letter]) -> usize {
        1 + letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    /// Same letters on `n >= strands` strands.
    pub fn with_strands(&self, n: usize) -> Result<BraidWord, BraidError> {
        BraidWord::new(n, self.letters.clone())
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            strands: self.strands.max(other.strands),
            letters,
        }
    }

    pub fn push(&mut self, l: Letter) {
        self.strands = self.strands.max(l.index() + 1);
        self.letters.push(l);
    }

    pub fn prepend(&self, l: Letter) -> BraidWord {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(l);
        letters.extend_from_slice(&self.letters);
        BraidWord {
            strands: self.strands.max(l.index() + 1),
            letters,
        }
    }

    pub fn append(&self, l: Letter) -> BraidWord {
        let mut w = self.clone();
        w.push(l);
        w
    }

    /// Underlying permutation in one-line form (0-based): position `p` of
    /// the result holds the strand that ends at `p`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let i = l.index();
            p.swap(i - 1, i);
        }
        p
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        let p = self.permutation();
        let mut seen = vec![false; p.len()];
        let mut cycles = 0;
        for start in 0..p.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = p[k];
            }
        }
        cycles
    }

    /// Positions (0-based) of the singular letters.
    pub fn singular_positions(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_singular())
            .map(|(k, _)| k)
            .collect()
    }

    /// The word with singular letter number `j` (in reading order) resolved:
    /// replaced by the positive crossing when `to_positive`, deleted otherwise.
    pub fn resolve_one(&self, j: usize, to_positive: bool) -> BraidWord {
        let pos = self.singular_positions()[j];
        let mut letters = self.letters.clone();
        if to_positive {
            letters[pos] = Letter::Pos(letters[pos].index());
        } else {
            letters.remove(pos);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// β(S) for the subset encoded by `mask` (bit `j-1` set means the j-th
    /// singular letter becomes a positive crossing; otherwise it is removed).
    pub fn resolution(&self, mask: u64) -> BraidWord {
        let mut j = 0;
        let mut letters = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            match l {
                Letter::Sing(i) => {
                    if mask >> j & 1 == 1 {
                        letters.push(Letter::Pos(*i));
                    }
                    j += 1;
                }
                other => letters.push(*other),
            }
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// All 2^d resolutions, ordered by bitmask. Subsets are 1-based.
    pub fn resolutions(&self) -> Vec<(Vec<usize>, BraidWord)> {
        let d = self.degree();
        assert!(d < 64, "too many singular points");
        (0..1u64 << d)
            .map(|mask| {
                let subset = (0..d)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| j + 1)
                    .collect();
                (subset, self.resolution(mask))
            })
            .collect()
    }

    /// Moves the first letter to the end.
    pub fn rotate(&self) -> BraidWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(1);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// `g w g^{-1}`.
    pub fn markov_conjugate(&self, g: Letter) -> Result<BraidWord, BraidError> {
        let inv = g.inverse().ok_or(BraidError::SingularConjugator(g))?;
        if g.index() == 0 || g.index() >= self.strands {
            return Err(BraidError::IndexOutOfRange {
                index: g.index(),
                strands: self.strands,
            });
        }
        let mut letters = Vec::with_capacity(self.letters.len() + 2);
        letters.push(g);
        letters.extend_from_slice(&self.letters);
        letters.push(inv);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// Appends σ_n^{±1} on n+1 strands.
    pub fn markov_stabilize(&self, sign: Sign) -> BraidWord {
        let n = self.strands;
        let mut letters = self.letters.clone();
        letters.push(match sign {
            Sign::Plus => Letter::Pos(n),
            Sign::Minus => Letter::Neg(n),
        });
        BraidWord {
            strands: n + 1,
            letters,
        }
    }

    /// Inverse of [`markov_stabilize`](Self::markov_stabilize) when the last
    /// letter is the only use of σ_{n-1}.
    pub fn markov_destabilize(&self) -> Option<BraidWord> {
        let n = self.strands;
        let (last, rest) = self.letters.split_last()?;
        if n < 2 || last.index() != n - 1 || last.is_singular() {
            return None;
        }
        if rest.iter().any(|l| l.index() == n - 1) {
            return None;
        }
        Some(BraidWord {
            strands: n - 1,
            letters: rest.to_vec(),
        })
    }

    /// Minimal text form; see the module docs for the grammar.
    pub fn format(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.strands != BraidWord::inferred_strands(&self.letters) {
            parts.push(format!("n={}", self.strands));
        }
        let mut k = 0;
        while k < self.letters.len() {
            let l = self.letters[k];
            let mut run = 1;
            while k + run < self.letters.len() && self.letters[k + run] == l {
                run += 1;
            }
            if run == 1 {
                parts.push(l.to_string());
            } else {
                parts.push(format!("{l}^{run}"));
            }
            k += run;
        }
        parts.join(" ")
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl std::str::FromStr for BraidWord {
    type Err = BraidError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, None)
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> BraidError {
    BraidError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn parse_uint(text: &str, pos: usize, what: &str) -> Result<usize, BraidError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(pos, format!("expected {what}")));
    }
    text.parse::<usize>()
        .map_err(|_| syntax(pos, format!("{what} too large")))
}

fn parse_token(tok: &str, pos: usize) -> Result<(Letter, usize), BraidError> {
    let (body, reps) = match tok.find('^') {
        Some(k) => {
            let reps = parse_uint(&tok[k + 1..], pos + k + 1, "repeat count")?;
            if reps == 0 {
                return Err(syntax(pos + k + 1, "repeat count must be at least 1"));
            }
            (&tok[..k], reps)
        }
        None => (tok, 1),
    };
    let kind = body.as_bytes().first().copied();
    let (digits, inverse) = match body.strip_suffix('\'') {
        Some(d) => (&d[1..], true),
        None if !body.is_empty() => (&body[1..], false),
        None => return Err(syntax(pos, "empty generator")),
    };
    let index = parse_uint(digits, pos + 1, "generator index")?;
    if index == 0 {
        return Err(syntax(pos + 1, "generator indices start at 1"));
    }
    let letter = match (kind, inverse) {
        (Some(b's'), false) => Letter::Pos(index),
        (Some(b's'), true) => Letter::Neg(index),
        (Some(b't'), false) => Letter::Sing(index),
        (Some(b't'), true) => {
            return Err(syntax(
                pos + body.len() - 1,
                "singular generators have no inverse",
            ))
        }
        _ => return Err(syntax(pos, format!("unknown generator `{body}`"))),
    };
    Ok((letter, reps))
}

/// Parses a word. `strands` overrides strand inference; it must agree with an
/// explicit `n=` token when both are present.
pub fn parse(text: &str, strands: Option<usize>) -> Result<BraidWord, BraidError> {
    let mut letters = Vec::new();
    let mut declared: Option<usize> = None;
    let mut first = true;
    for tok in text.split_whitespace() {
        let pos = tok.as_ptr() as usize - text.as_ptr() as usize;
        if let Some(n) = tok.strip_prefix("n=") {
            if !first {
                return Err(syntax(pos, "`n=` must be the first token"));
            }
            declared = Some(parse_uint(n, pos + 2, "strand count")?);
        } else {
            let (l, reps) = parse_token(tok, pos)?;
            letters.extend(std::iter::repeat_n(l, reps));
        }
        first = false;
    }
    let n = match (declared, strands) {
        (Some(a), Some(b)) if a != b => {
            return Err(BraidError::StrandConflict {
                given: b,
                declared: a,
            })
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => BraidWord::inferred_strands(&letters),
    };
    BraidWord::new(n, letters)
}

/// Random word with exactly `singular` singular letters among `len` letters.
pub fn random_word<R: Rng + ?Sized>(
    rng: &mut R,
    strands: usize,
    len: usize,
    singular: usize,
) -> BraidWord {
    assert!(strands >= 2 || len == 0, "need two strands for letters");
    let len = len.max(singular);
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len - singular {
        let i = rng.random_range(1..strands);
        letters.push(if rng.random_bool(0.5) {
            Letter::Pos(i)
        } else {
            Letter::Neg(i)
        });
    }
    for _ in 0..singular {
        let i = rng.random_range(1..strands);
        let at = rng.random_range(0..=letters.len());
        letters.insert(at, Letter::Sing(i));
    }
    BraidWord {
        strands: strands.max(1),
        letters,
    }
}

/// Random word using only positive crossings.
pub fn random_positive_word<R: Rng + ?Sized>(rng: &mut R, strands: usize, len: usize) -> BraidWord {
    let letters = (0..len)
        .map(|_| Letter::Pos(rng.random_range(1..strands)))
        .collect();
    BraidWord {
        strands: strands.max(1),
        letters,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Rotate,
    Conjugate,
    StabPlus,
    StabMinus,
    Destab,
}

/// `steps` random Markov moves with the strand count capped at `n + 2`.
pub fn random_markov_walk(w: &BraidWord, steps: usize, seed: u64) -> BraidWord {
    random_markov_walk_with(w, steps, seed, w.strands() + 2)
}

pub fn random_markov_walk_with(
    w: &BraidWord,
    steps: usize,
    seed: u64,
    max_strands: usize,
) -> BraidWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = w.clone();
    for _ in 0..steps {
        let mut moves = Vec::with_capacity(5);
        if cur.len() > 1 {
            moves.push(Move::Rotate);
        }
        if cur.strands() >= 2 {
            moves.push(Move::Conjugate);
        }
        if cur.strands() < max_strands {
            moves.push(Move::StabPlus);
            moves.push(Move::StabMinus);
        }
        if cur.markov_destabilize().is_some() {
            moves.push(Move::Destab);
        }
        let Some(&mv) = moves.choose(&mut rng) else {
            continue;
        };
        cur = match mv {
            Move::Rotate => cur.rotate(),
            Move::Conjugate => {
                let i = rng.random_range(1..cur.strands());
                let g = if rng.random_bool(0.5) {
                    Letter::Pos(i)
                } else {
                    Letter::Neg(i)
                };
                cur.markov_conjugate(g).expect("index in range")
            }
            Move::StabPlus => cur.markov_stabilize(Sign::Plus),
            Move::StabMinus => cur.markov_stabilize(Sign::Minus),
            Move::Destab => cur.markov_destabilize().expect("applicable"),
        };
    }
    cur
}

/// Shifts every index by `k`, raising the strand count accordingly.
pub fn shift_word(w: &BraidWord, k: usize) -> BraidWord {
    BraidWord {
        strands: w.strands + k,
        letters: w
            .letters
            .iter()
            .map(|l| l.with_index(l.index() + k))
            .collect(),
    }
}
