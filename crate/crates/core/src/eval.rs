//! Evaluation of trace polynomials at matrix tuples, the generation test,
//! and the intertwiner-based conjugacy test.
//!
//! Evaluation is exact. Coefficients are cleared of denominators and, for
//! integral tuples, the work runs in checked `i128` first and `BigInt` on
//! overflow; rational tuples go straight to rational arithmetic.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::linalg::{solve_linear, SpanBasis};
use crate::matrix::{Matrix, MatrixTuple};
use crate::nullstellensatz::IdealPresentation;
use crate::poly::TracePolynomial;
use crate::scalar::{common_denominator, Scalar};
use crate::word::{Letter, Word};

/// Exact value of a polynomial at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationReport {
    pub value: Matrix,
    pub is_zero: bool,
    pub is_scalar: bool,
    /// Present iff `is_scalar`.
    pub scalar: Option<Scalar>,
}

impl EvaluationReport {
    pub fn from_value(value: Matrix) -> Self {
        let scalar = value.as_scalar();
        EvaluationReport {
            is_zero: scalar.as_ref().is_some_and(Zero::is_zero),
            is_scalar: scalar.is_some(),
            scalar,
            value,
        }
    }

    /// Scalar and nonzero.
    pub fn is_nonzero_scalar(&self) -> bool {
        self.is_scalar && !self.is_zero
    }
}

pub(crate) trait Ring: Clone {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_add(&self, other: &Self) -> Option<Self>;
    fn r_mul(&self, other: &Self) -> Option<Self>;
    fn r_is_zero(&self) -> bool;
    fn from_int(v: &BigInt) -> Option<Self>;
    fn from_scalar(v: &Scalar) -> Option<Self>;
    fn into_scalar(self) -> Scalar;
}

impl Ring for i128 {
    fn r_zero() -> Self {
        0
    }
    fn r_one() -> Self {
        1
    }
    fn r_add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn r_mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn r_is_zero(&self) -> bool {
        *self == 0
    }
    fn from_int(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn from_scalar(v: &Scalar) -> Option<Self> {
        if v.is_integer() {
            v.numer().to_i128()
        } else {
            None
        }
    }
    fn into_scalar(self) -> Scalar {
        Scalar::from_integer(BigInt::from(self))
    }
}

impl Ring for BigInt {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn r_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn from_scalar(v: &Scalar) -> Option<Self> {
        v.is_integer().then(|| v.numer().clone())
    }
    fn into_scalar(self) -> Scalar {
        Scalar::from_integer(self)
    }
}

impl Ring for Scalar {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn r_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(v: &BigInt) -> Option<Self> {
        Some(Scalar::from_integer(v.clone()))
    }
    fn from_scalar(v: &Scalar) -> Option<Self> {
        Some(v.clone())
    }
    fn into_scalar(self) -> Scalar {
        self
    }
}

/// Row-major `n x n` matrix over a [`Ring`].
#[derive(Clone)]
struct RMat<R> {
    n: usize,
    e: Vec<R>,
}

impl<R: Ring> RMat<R> {
    fn identity(n: usize) -> Self {
        let mut e = vec![R::r_zero(); n * n];
        for i in 0..n {
            e[i * n + i] = R::r_one();
        }
        RMat { n, e }
    }

    fn zero(n: usize) -> Self {
        RMat { n, e: vec![R::r_zero(); n * n] }
    }

    fn from_matrix(a: &Matrix) -> Option<Self> {
        let e = a.entries().iter().map(R::from_scalar).collect::<Option<Vec<_>>>()?;
        Some(RMat { n: a.n(), e })
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.e[i * n + k];
                if a.r_is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.e[k * n + j];
                    if !b.r_is_zero() {
                        let slot = &mut out.e[i * n + j];
                        *slot = slot.r_add(&a.r_mul(b)?)?;
                    }
                }
            }
        }
        Some(out)
    }

    fn trace(&self) -> Option<R> {
        (0..self.n).try_fold(R::r_zero(), |acc, i| acc.r_add(&self.e[i * self.n + i]))
    }

    fn add_scaled(&mut self, other: &Self, s: &R) -> Option<()> {
        for (x, y) in self.e.iter_mut().zip(&other.e) {
            if !y.r_is_zero() {
                *x = x.r_add(&y.r_mul(s)?)?;
            }
        }
        Some(())
    }
}

/// Visits the products of `words` (sorted lexicographically by letters),
/// reusing the longest common prefix with the previous word.
fn for_each_word_product<R: Ring>(
    words: &[&[Letter]],
    gens: &[RMat<R>],
    n: usize,
    mut visit: impl FnMut(usize, &RMat<R>) -> Option<()>,
) -> Option<()> {
    let identity = RMat::identity(n);
    let mut stack: Vec<RMat<R>> = Vec::new();
    let mut prev: &[Letter] = &[];
    for (idx, w) in words.iter().enumerate() {
        let common = prev.iter().zip(w.iter()).take_while(|(a, b)| a == b).count();
        stack.truncate(common);
        for &l in &w[common..] {
            let next = stack.last().unwrap_or(&identity).mul(&gens[l as usize])?;
            stack.push(next);
        }
        visit(idx, stack.last().unwrap_or(&identity))?;
        prev = w;
    }
    Some(())
}

/// Integer coefficient and indices of its trace factors.
type TracedCoefficient = (BigInt, Vec<usize>);

/// A polynomial prepared for repeated exact evaluation.
#[derive(Clone, Debug)]
pub struct Evaluator {
    m: usize,
    denominator: BigInt,
    trace_words: Vec<Word>,
    /// Distinct plain words in lexicographic letter order, each with its
    /// (integral coefficient, trace-word indices) parts.
    plain: Vec<(Word, Vec<TracedCoefficient>)>,
}

impl Evaluator {
    pub fn new(p: &TracePolynomial) -> Self {
        let denominator = common_denominator(p.terms().values());
        let mut trace_words: Vec<Word> = p.terms().keys().flat_map(|k| k.traces.iter().cloned()).collect();
        trace_words.sort_by(|a, b| a.letters().cmp(b.letters()));
        trace_words.dedup();
        let mut plain: Vec<(Word, Vec<TracedCoefficient>)> = Vec::new();
        let mut keyed: Vec<_> = p.terms().iter().collect();
        keyed.sort_by(|a, b| a.0.plain.letters().cmp(b.0.plain.letters()));
        for (key, c) in keyed {
            let scaled = (c * Scalar::from_integer(denominator.clone())).to_integer();
            let idx = key
                .traces
                .iter()
                .map(|t| trace_words.binary_search_by(|x| x.letters().cmp(t.letters())).expect("indexed"))
                .collect();
            match plain.last_mut() {
                Some((w, parts)) if *w == key.plain => parts.push((scaled, idx)),
                _ => plain.push((key.plain.clone(), vec![(scaled, idx)])),
            }
        }
        Evaluator {
            m: p.m(),
            denominator,
            trace_words,
            plain,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn run<R: Ring>(&self, a: &MatrixTuple) -> Option<RMat<R>> {
        let n = a.n();
        let gens = a.matrices().iter().map(RMat::<R>::from_matrix).collect::<Option<Vec<_>>>()?;
        let mut traces = Vec::with_capacity(self.trace_words.len());
        let tw: Vec<&[Letter]> = self.trace_words.iter().map(Word::letters).collect();
        for_each_word_product(&tw, &gens, n, |_, prod| {
            traces.push(prod.trace()?);
            Some(())
        })?;
        let mut weights = Vec::with_capacity(self.plain.len());
        for (_, parts) in &self.plain {
            let mut total = R::r_zero();
            for (c, idx) in parts {
                let mut v = R::from_int(c)?;
                for &i in idx {
                    v = v.r_mul(&traces[i])?;
                }
                total = total.r_add(&v)?;
            }
            weights.push(total);
        }
        let mut out = RMat::zero(n);
        let pw: Vec<&[Letter]> = self.plain.iter().map(|(w, _)| w.letters()).collect();
        for_each_word_product(&pw, &gens, n, |i, prod| out.add_scaled(prod, &weights[i]))?;
        Some(out)
    }

    fn finish<R: Ring>(&self, n: usize, raw: RMat<R>) -> Matrix {
        let d = Scalar::from_integer(self.denominator.clone());
        Matrix::from_flat(n, raw.e.into_iter().map(|x| x.into_scalar() / &d).collect())
    }

    pub fn eval(&self, a: &MatrixTuple) -> Result<Matrix> {
        if a.m() != self.m {
            return Err(CoreError::ArityMismatch { poly: self.m, tuple: a.m() });
        }
        let n = a.n();
        if a.is_integral() {
            if let Some(raw) = self.run::<i128>(a) {
                return Ok(self.finish(n, raw));
            }
            let raw = self.run::<BigInt>(a).expect("big integers do not overflow");
            return Ok(self.finish(n, raw));
        }
        let raw = self.run::<Scalar>(a).expect("rationals do not overflow");
        Ok(self.finish(n, raw))
    }

    pub fn report(&self, a: &MatrixTuple) -> Result<EvaluationReport> {
        Ok(EvaluationReport::from_value(self.eval(a)?))
    }
}

/// `tr(w(a))` for each word, in input order.
pub(crate) fn traces_of_words(words: &[Word], a: &MatrixTuple) -> Vec<Scalar> {
    fn run<R: Ring>(words: &[Word], order: &[usize], a: &MatrixTuple) -> Option<Vec<Scalar>> {
        let gens = a.matrices().iter().map(RMat::<R>::from_matrix).collect::<Option<Vec<_>>>()?;
        let sorted: Vec<&[Letter]> = order.iter().map(|&i| words[i].letters()).collect();
        let mut out = vec![Scalar::zero(); words.len()];
        for_each_word_product(&sorted, &gens, a.n(), |k, prod| {
            out[order[k]] = prod.trace()?.into_scalar();
            Some(())
        })?;
        Some(out)
    }
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&i, &j| words[i].letters().cmp(words[j].letters()));
    if a.is_integral() {
        if let Some(v) = run::<i128>(words, &order, a) {
            return v;
        }
        return run::<BigInt>(words, &order, a).expect("big integers do not overflow");
    }
    run::<Scalar>(words, &order, a).expect("rationals do not overflow")
}

pub fn evaluate(p: &TracePolynomial, a: &MatrixTuple) -> Result<EvaluationReport> {
    Evaluator::new(p).report(a)
}

/// Dimensions `dim V_0 <= dim V_1 <= ...` of the chain `V_0 = span{I}`,
/// `V_(k+1) = V_k + sum_i V_k a_i`, up to stabilization.
pub fn span_chain(a: &MatrixTuple) -> Vec<usize> {
    let n = a.n();
    let mut span = SpanBasis::new(n * n);
    let id = Matrix::identity(n);
    span.insert(id.entries().to_vec());
    let mut layer = vec![id];
    let mut dims = vec![1];
    while !layer.is_empty() && !span.is_full() {
        let mut next = Vec::new();
        for v in &layer {
            for g in a.matrices() {
                let prod = v.mul_unchecked(g);
                if span.insert(prod.entries().to_vec()) {
                    next.push(prod);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        dims.push(span.rank());
        layer = next;
    }
    dims
}

/// Whether the tuple generates `M_n` as a unital algebra.
pub fn generates(a: &MatrixTuple) -> bool {
    let n = a.n();
    span_chain(a).last().copied() == Some(n * n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyCertificate {
    pub conjugate: bool,
    /// Invertible `g` with `g a_i = b_i g`, present iff `conjugate`.
    pub witness: Option<Matrix>,
    pub intertwiner_dim: usize,
}

/// Scope note carried by every conjugacy verdict.
pub const CONJUGACY_SCOPE: &str =
    "intertwiner dimension and witness invertibility are unchanged by field extension, so the verdict holds over the algebraic closure";

/// Basis of `{g : g a_i = b_i g for all i}` as row-major matrices.
pub fn intertwiners(a: &MatrixTuple, b: &MatrixTuple) -> Result<Vec<Matrix>> {
    check_same_shape(a, b)?;
    let n = a.n();
    let mut rows = Vec::with_capacity(a.m() * n * n);
    for (ai, bi) in a.matrices().iter().zip(b.matrices()) {
        for r in 0..n {
            for s in 0..n {
                // (g a)_(r,s) - (b g)_(r,s) = sum_t g_(r,t) a_(t,s) - b_(r,t) g_(t,s)
                let mut row = vec![Scalar::zero(); n * n];
                for t in 0..n {
                    row[r * n + t] += ai.get(t, s);
                    row[t * n + s] -= bi.get(r, t);
                }
                rows.push(row);
            }
        }
    }
    Ok(solve_linear(&rows, n * n).into_iter().map(|v| Matrix::from_flat(n, v)).collect())
}

fn check_same_shape(a: &MatrixTuple, b: &MatrixTuple) -> Result<()> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(CoreError::DimensionMismatch(format!(
            "tuples of shape (m={}, n={}) and (m={}, n={})",
            a.m(),
            a.n(),
            b.m(),
            b.n()
        )));
    }
    Ok(())
}

/// Decides simultaneous conjugacy of two generating tuples by Schur's lemma.
pub fn conjugate_test(a: &MatrixTuple, b: &MatrixTuple) -> Result<ConjugacyCertificate> {
    check_same_shape(a, b)?;
    for (name, t) in [("first", a), ("second", b)] {
        if !generates(t) {
            return Err(CoreError::Precondition(format!("{name} tuple does not generate M_{}", t.n())));
        }
    }
    let basis = intertwiners(a, b)?;
    match basis.len() {
        0 => Ok(ConjugacyCertificate {
            conjugate: false,
            witness: None,
            intertwiner_dim: 0,
        }),
        1 => {
            let g = basis.into_iter().next().expect("one element");
            if !g.is_invertible() {
                return Err(CoreError::Inconsistency(
                    "nonzero intertwiner between generating tuples is singular".into(),
                ));
            }
            Ok(ConjugacyCertificate {
                conjugate: true,
                witness: Some(g),
                intertwiner_dim: 1,
            })
        }
        d => Err(CoreError::Inconsistency(format!(
            "intertwiner space of dimension {d} between generating tuples"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealImage {
    /// Every generator vanishes: the point lies in the zero locus.
    ZeroImage,
    /// Some generator is nonzero, so the image ideal is all of `M_n`.
    FullImage,
}

/// Image of the two-sided ideal `J` under evaluation at a generating point.
/// `M_n` is simple, so one nonzero generator image already generates it.
pub fn ideal_dichotomy(ideal: &IdealPresentation, a: &MatrixTuple) -> Result<IdealImage> {
    if a.m() != ideal.m() || a.n() != ideal.n() {
        return Err(CoreError::Precondition(format!(
            "point of shape (m={}, n={}) for an ideal over (m={}, n={})",
            a.m(),
            a.n(),
            ideal.m(),
            ideal.n()
        )));
    }
    if !generates(a) {
        return Err(CoreError::Precondition("point does not generate M_n".into()));
    }
    for g in ideal.generators() {
        if !Evaluator::new(g).eval(a)?.is_zero() {
            return Ok(IdealImage::FullImage);
        }
    }
    Ok(IdealImage::ZeroImage)
}

impl Serialize for EvaluationReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("EvaluationReport", 4)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("isZero", &self.is_zero)?;
        st.serialize_field("isScalar", &self.is_scalar)?;
        st.serialize_field("scalar", &self.scalar.as_ref().map(crate::scalar::format_scalar))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::Builtin;
    use crate::parse::parse;
    use crate::scalar::{frac, int};

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(2, i - 1, j - 1)
    }

    fn pair(a: Matrix, b: Matrix) -> MatrixTuple {
        MatrixTuple::new(vec![a, b]).unwrap()
    }

    #[test]
    fn commutator_at_matrix_units() {
        let r = evaluate(&parse("X1*X2 - X2*X1", 2, None).unwrap(), &pair(e(1, 2), e(2, 1))).unwrap();
        assert_eq!(r.value, e(1, 1).sub(&e(2, 2)).unwrap());
        assert!(!r.is_scalar && !r.is_zero && r.scalar.is_none());
    }

    #[test]
    fn trace_coefficient_times_word() {
        let r = evaluate(&parse("tr(X1*X2)*X1", 2, None).unwrap(), &pair(e(1, 2), e(2, 1))).unwrap();
        assert_eq!(r.value, e(1, 2));
    }

    #[test]
    fn commutator_square_is_identity() {
        let p = Builtin::CommutatorSquare.polynomial().unwrap();
        let r = evaluate(&p, &pair(e(1, 2), e(2, 1))).unwrap();
        assert!(r.is_scalar);
        assert_eq!(r.scalar, Some(int(1)));
        assert_eq!(r.value, Matrix::identity(2));
    }

    #[test]
    fn rational_points_and_coefficients() {
        let p = parse("1/2*X1*X1 + 1/3", 1, None).unwrap();
        let a = MatrixTuple::new(vec![Matrix::scalar(2, frac(1, 2))]).unwrap();
        let r = evaluate(&p, &a).unwrap();
        assert_eq!(r.scalar, Some(frac(1, 8) + frac(1, 3)));
    }

    #[test]
    fn big_integer_fallback_matches_rational_route() {
        let p = parse("X1^9 - 3*tr(X1^4)*X1", 1, None).unwrap();
        let a = MatrixTuple::new(vec![Matrix::from_ints(&[[1_000_000_000_000, 3], [-7, 5]])]).unwrap();
        let fast = evaluate(&p, &a).unwrap().value;
        let x = a.get(0);
        let slow = x.pow(9).sub(&x.scale(&(x.pow(4).trace() * int(3)))).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn arity_mismatch() {
        let p = parse("X1", 1, None).unwrap();
        assert!(matches!(
            evaluate(&p, &pair(e(1, 1), e(2, 2))),
            Err(CoreError::ArityMismatch { poly: 1, tuple: 2 })
        ));
    }

    #[test]
    fn generation() {
        assert!(generates(&pair(e(1, 2), e(2, 1))));
        assert_eq!(span_chain(&pair(e(1, 2), e(2, 1))), vec![1, 3, 4]);
        let d = |a, b| Matrix::diag(&[int(a), int(b)]);
        assert!(!generates(&pair(d(1, 2), d(3, 4))));
        assert!(!generates(&pair(Matrix::identity(2), Matrix::identity(2))));
    }

    #[test]
    fn conjugacy() {
        let a = pair(e(1, 2), e(2, 1));
        let g = Matrix::from_ints(&[[1, 1], [0, 1]]);
        let b = a.conjugate_by(&g).unwrap();
        let cert = conjugate_test(&a, &b).unwrap();
        assert!(cert.conjugate);
        assert_eq!(cert.intertwiner_dim, 1);
        let w = cert.witness.unwrap();
        assert!(g.inverse().unwrap().mul(&w).unwrap().as_scalar().is_some());

        let c = pair(e(1, 2), e(2, 1).add(&e(1, 2)).unwrap());
        let cert = conjugate_test(&a, &c).unwrap();
        assert!(!cert.conjugate && cert.witness.is_none());

        let cert = conjugate_test(&a, &a).unwrap();
        assert_eq!(cert.witness, Some(Matrix::identity(2)));
    }

    #[test]
    fn conjugacy_requires_generating_tuples() {
        let a = pair(e(1, 2), e(2, 1));
        let bad = pair(Matrix::identity(2), Matrix::identity(2));
        assert!(matches!(conjugate_test(&a, &bad), Err(CoreError::Precondition(_))));
    }

    #[test]
    fn dichotomy() {
        let j = IdealPresentation::parse(2, 2, &["X1*X2 + X2*X1", "X1^2 - 1", "X2^2 - 1"]).unwrap();
        let pauli = pair(e(1, 2).add(&e(2, 1)).unwrap(), Matrix::diag(&[int(1), int(-1)]));
        assert_eq!(ideal_dichotomy(&j, &pauli).unwrap(), IdealImage::ZeroImage);
        assert_eq!(ideal_dichotomy(&j, &pair(e(1, 2), e(2, 1))).unwrap(), IdealImage::FullImage);
        let empty = IdealPresentation::new(2, 2, vec![]).unwrap();
        assert_eq!(ideal_dichotomy(&empty, &pauli).unwrap(), IdealImage::ZeroImage);
    }
}
