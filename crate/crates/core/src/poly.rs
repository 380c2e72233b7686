//! Normal forms for the free algebra, generic matrices and the trace ring.
//!
//! A [`TracePolynomial`] is a rational combination of terms
//! `tr(u_1) ... tr(u_k) * w` where each `u_i` is stored as its least cyclic
//! rotation and `w` is a plain word. Trace factors are central, so a term is
//! keyed by the sorted multiset of trace words together with the plain word.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::limits::Limits;
use crate::scalar::{format_scalar, int, Scalar};
use crate::word::{Letter, Word};

/// Key of a term: the plain word, then the sorted trace words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialKey {
    pub plain: Word,
    pub traces: Vec<Word>,
}

impl MonomialKey {
    pub fn word(plain: Word) -> Self {
        MonomialKey { plain, traces: Vec::new() }
    }

    fn product(&self, other: &MonomialKey) -> MonomialKey {
        let mut traces = Vec::with_capacity(self.traces.len() + other.traces.len());
        traces.extend_from_slice(&self.traces);
        traces.extend_from_slice(&other.traces);
        traces.sort();
        MonomialKey {
            plain: self.plain.concat(&other.plain),
            traces,
        }
    }

    /// Degree in the matrix entries.
    pub fn degree(&self) -> usize {
        self.plain.len() + self.traces.iter().map(Word::len).sum::<usize>()
    }
}

/// A borrowed view of one stored term.
#[derive(Clone, Copy, Debug)]
pub struct TraceMonomial<'a> {
    pub coefficient: &'a Scalar,
    pub trace_factors: &'a [Word],
    pub plain_word: &'a Word,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TracePolynomial {
    m: usize,
    terms: BTreeMap<MonomialKey, Scalar>,
}

impl TracePolynomial {
    pub fn zero(m: usize) -> Self {
        TracePolynomial { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Scalar) -> Self {
        Self::from_terms(m, [(MonomialKey::word(Word::empty()), c)])
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, Scalar::one())
    }

    /// The generator `X_index`, one-based.
    pub fn generator(m: usize, index: usize) -> Result<Self> {
        if index == 0 || index > m {
            return Err(CoreError::UnknownGenerator { index, m });
        }
        Ok(Self::word(m, Word::letter((index - 1) as Letter)))
    }

    pub fn word(m: usize, w: Word) -> Self {
        Self::from_terms(m, [(MonomialKey::word(w), Scalar::one())])
    }

    /// `tr(w)` for a nonempty word.
    pub fn trace_of_word(m: usize, w: &Word) -> Self {
        assert!(!w.is_empty(), "trace of the empty word depends on n");
        Self::from_terms(
            m,
            [(
                MonomialKey {
                    plain: Word::empty(),
                    traces: vec![w.canonical_rotation()],
                },
                Scalar::one(),
            )],
        )
    }

    /// Collects terms, summing duplicates and dropping zeros. Trace words are
    /// canonicalized and sorted here and must be nonempty.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (MonomialKey, Scalar)>) -> Self {
        let mut map: BTreeMap<MonomialKey, Scalar> = BTreeMap::new();
        for (mut key, c) in terms {
            for t in key.traces.iter_mut() {
                assert!(!t.is_empty(), "trace of the empty word depends on n");
                *t = t.canonical_rotation();
            }
            key.traces.sort();
            *map.entry(key).or_insert_with(Scalar::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        TracePolynomial { m, terms: map }
    }

    pub fn from_word_terms(m: usize, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        Self::from_terms(m, terms.into_iter().map(|(w, c)| (MonomialKey::word(w), c)))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of stored terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<MonomialKey, Scalar> {
        &self.terms
    }

    pub fn monomials(&self) -> impl Iterator<Item = TraceMonomial<'_>> {
        self.terms.iter().map(|(k, c)| TraceMonomial {
            coefficient: c,
            trace_factors: &k.traces,
            plain_word: &k.plain,
        })
    }

    pub fn coefficient(&self, key: &MonomialKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_trace_free(&self) -> bool {
        self.terms.keys().all(|k| k.traces.is_empty())
    }

    /// True when no term carries a plain word, i.e. an invariant function.
    pub fn is_word_free(&self) -> bool {
        self.terms.keys().all(|k| k.plain.is_empty())
    }

    /// Coefficient of the bare identity term.
    pub fn constant_coefficient(&self) -> Scalar {
        self.coefficient(&MonomialKey::word(Word::empty()))
    }

    /// Total degree in the matrix entries; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MonomialKey::degree).max().unwrap_or(0)
    }

    /// Plain words with coefficients of a trace-free polynomial.
    pub fn word_terms(&self) -> Result<Vec<(Word, Scalar)>> {
        if !self.is_trace_free() {
            return Err(CoreError::NotTraceFree);
        }
        Ok(self.terms.iter().map(|(k, c)| (k.plain.clone(), c.clone())).collect())
    }

    /// Largest generator index actually used, one-based.
    pub fn used_generators(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|k| std::iter::once(&k.plain).chain(&k.traces))
            .filter_map(Word::max_letter)
            .map(|l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Reinterprets the polynomial in `m >= self.m()` generators.
    pub fn with_generators(&self, m: usize) -> Result<Self> {
        if m < self.used_generators() {
            return Err(CoreError::GeneratorCountMismatch(self.m, m));
        }
        Ok(TracePolynomial { m, terms: self.terms.clone() })
    }

    fn check_m(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(CoreError::GeneratorCountMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_m(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn add_term(&mut self, key: MonomialKey, c: Scalar) {
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.m);
        }
        TracePolynomial {
            m: self.m,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, &Limits::default())
    }

    /// Product, refusing when the number of term products exceeds the
    /// monomial ceiling.
    pub fn mul_with(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.check_m(other)?;
        let needed = self.terms.len() as u128 * other.terms.len() as u128;
        if needed > limits.monomial_ceiling {
            return Err(CoreError::Resource {
                what: "polynomial product",
                needed,
                ceiling: limits.monomial_ceiling,
            });
        }
        let mut acc: HashMap<MonomialKey, Scalar> = HashMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                *acc.entry(ka.product(kb)).or_insert_with(Scalar::zero) += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(TracePolynomial { m: self.m, terms })
    }

    pub fn pow_with(&self, k: u32, limits: &Limits) -> Result<Self> {
        let mut acc = Self::one(self.m);
        for _ in 0..k {
            acc = acc.mul_with(self, limits)?;
        }
        Ok(acc)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// The trace of the polynomial. `tr(1) = n`, so a constant term needs `n`.
    pub fn trace(&self, n: Option<usize>) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            if k.plain.is_empty() {
                let n = n.ok_or(CoreError::TraceOfConstantWithoutSize)?;
                out.push((k.clone(), c * int(n as i64)));
            } else {
                let mut traces = k.traces.clone();
                traces.push(k.plain.clone());
                out.push((MonomialKey { plain: Word::empty(), traces }, c.clone()));
            }
        }
        Ok(Self::from_terms(self.m, out))
    }

    /// Determinant through Newton's identities on `tr(self^k)`, `k <= n`.
    pub fn det(&self, n: usize, limits: &Limits) -> Result<Self> {
        let mut power = Self::one(self.m);
        let mut power_sums = Vec::with_capacity(n);
        for _ in 0..n {
            power = power.mul_with(self, limits)?;
            power_sums.push(power.trace(Some(n))?);
        }
        let mut e = vec![Self::one(self.m)];
        for j in 1..=n {
            let mut acc = Self::zero(self.m);
            for i in 1..=j {
                let term = e[j - i].mul_with(&power_sums[i - 1], limits)?;
                acc = if i % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            e.push(acc.scale(&Scalar::new(1.into(), (j as i64).into())));
        }
        Ok(e.pop().expect("n >= 0 leaves e_n"))
    }

    /// Substitutes `values[i]` for `X_(i+1)` in a trace-free polynomial.
    pub fn substitute(&self, values: &[TracePolynomial], limits: &Limits) -> Result<Self> {
        if values.len() != self.m {
            return Err(CoreError::ArityMismatch {
                poly: self.m,
                tuple: values.len(),
            });
        }
        let target_m = values.first().map(|v| v.m).unwrap_or(0);
        if let Some(bad) = values.iter().find(|v| v.m != target_m) {
            return Err(CoreError::GeneratorCountMismatch(target_m, bad.m));
        }
        let mut out = Self::zero(target_m);
        // Share prefix products between consecutive words.
        let mut stack: Vec<(Vec<Letter>, TracePolynomial)> = Vec::new();
        for (w, c) in self.word_terms()? {
            let letters = w.letters();
            let common = stack
                .iter()
                .zip(letters)
                .take_while(|((prefix, _), l)| prefix.last() == Some(l))
                .count();
            stack.truncate(common);
            for depth in common..letters.len() {
                let prev = stack.last().map(|(_, p)| p.clone()).unwrap_or_else(|| Self::one(target_m));
                let next = prev.mul_with(&values[letters[depth] as usize], limits)?;
                stack.push((letters[..=depth].to_vec(), next));
            }
            let value = stack.last().map(|(_, p)| p.clone()).unwrap_or_else(|| Self::one(target_m));
            out = out.add(&value.scale(&c))?;
        }
        Ok(out)
    }
}

impl fmt::Display for TracePolynomial {
    /// Prints in the expression grammar accepted by [`crate::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            let negative = c < &Scalar::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = key.traces.iter().map(|t| format!("tr({t})")).collect();
            if !key.plain.is_empty() {
                factors.push(key.plain.to_string());
            }
            if factors.is_empty() || !magnitude.is_one() {
                factors.insert(0, format_scalar(&magnitude));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TracePolynomial(m={}; {})", self.m, self)
    }
}

impl serde::Serialize for TracePolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
