//! Trace-word invariants of simultaneous conjugation.
//!
//! The values `tr(w(a))` over necklaces `w` are the coordinates used here for
//! the image of a point in the quotient by conjugation. A [`Fingerprint`]
//! records them up to a length bound; differing fingerprints prove that two
//! tuples are not conjugate, equal ones prove nothing on their own.

use std::fmt::Write as _;

use serde::Serialize;

use crate::builtins::Builtin;
use crate::error::{CoreError, Result};
use crate::eval::{traces_of_words, Evaluator};
use crate::matrix::MatrixTuple;
use crate::parse::parse;
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::word::{words_of_length, Word};

/// A cyclic class of nonempty words, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace(Word);

impl Necklace {
    /// Canonicalizes any nonempty word.
    pub fn of(w: &Word) -> Self {
        assert!(!w.is_empty(), "necklaces are nonempty");
        Necklace(w.canonical_rotation())
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// All necklaces of length `1..=max_len` over `m` letters, by length and
/// then lexicographically.
pub fn enumerate_necklaces(m: usize, max_len: usize) -> Vec<Necklace> {
    (1..=max_len)
        .flat_map(|len| words_of_length(m, len))
        .filter(Word::is_canonical_rotation)
        .map(Necklace)
        .collect()
}

pub fn default_max_len(n: usize) -> usize {
    n * n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub n: usize,
    pub m: usize,
    pub max_len: usize,
    pub values: Vec<(Necklace, Scalar)>,
}

pub fn fingerprint(a: &MatrixTuple, max_len: usize) -> Fingerprint {
    let necklaces = enumerate_necklaces(a.m(), max_len);
    let words: Vec<Word> = necklaces.iter().map(|k| k.word().clone()).collect();
    let traces = traces_of_words(&words, a);
    Fingerprint {
        n: a.n(),
        m: a.m(),
        max_len,
        values: necklaces.into_iter().zip(traces).collect(),
    }
}

impl Fingerprint {
    /// Header line, then one `necklace=value` line per entry.
    pub fn to_record(&self) -> String {
        let mut out = format!("fingerprint n={} m={} maxLen={}\n", self.n, self.m, self.max_len);
        for (k, v) in &self.values {
            let _ = writeln!(out, "{}={}", k.word(), format_scalar(v));
        }
        out
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let bad = |msg: &str| CoreError::Malformed(format!("fingerprint record: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("fingerprint") {
            return Err(bad("missing header"));
        }
        let mut field = |name: &str| -> Result<usize> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(name))
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(&format!("bad {name}")))
        };
        let (n, m, max_len) = (field("n")?, field("m")?, field("maxLen")?);
        let mut values = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (word, value) = line.rsplit_once('=').ok_or_else(|| bad(line))?;
            let p = parse(word, m, None)?;
            let (w, _) = p.word_terms()?.into_iter().next().ok_or_else(|| bad(line))?;
            values.push((Necklace::of(&w), parse_scalar(value)?));
        }
        let expected = enumerate_necklaces(m, max_len);
        if values.len() != expected.len() || values.iter().zip(&expected).any(|((k, _), e)| k != e) {
            return Err(bad("necklace list is not the canonical one"));
        }
        Ok(Fingerprint { n, m, max_len, values })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Separation {
    Distinct,
    /// Not a conjugacy certificate; confirm with the conjugacy test.
    Indistinguishable,
}

pub fn separated_by_fingerprint(a: &MatrixTuple, b: &MatrixTuple, max_len: usize) -> Result<Separation> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(CoreError::DimensionMismatch("tuples of different shape".into()));
    }
    Ok(if fingerprint(a, max_len) == fingerprint(b, max_len) {
        Separation::Indistinguishable
    } else {
        Separation::Distinct
    })
}

/// The invariant `friedland_c` at a pair of 2x2 matrices.
pub fn friedland(a: &MatrixTuple) -> Result<Scalar> {
    if a.n() != 2 || a.m() != 2 {
        return Err(CoreError::Precondition(format!(
            "friedland needs a pair of 2x2 matrices, got m={} n={}",
            a.m(),
            a.n()
        )));
    }
    let c = Builtin::FriedlandC.polynomial()?;
    Ok(Evaluator::new(&c).eval(a)?.get(0, 0).clone())
}
