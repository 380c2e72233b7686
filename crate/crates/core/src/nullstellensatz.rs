//! Point-level ideal computations: degree-truncated ideals of finite orbit
//! unions, zero-locus membership and separating polynomials.

use rayon::prelude::*;
use serde::Serialize;

use crate::central::{check_points, dedup_conjugates};
use crate::error::{CoreError, Result};
use crate::eval::{conjugate_test, ideal_dichotomy, Evaluator, IdealImage};
use crate::limits::Limits;
use crate::linalg::solve_linear;
use crate::matrix::{Matrix, MatrixTuple};
use crate::parse::parse_with;
use crate::poly::TracePolynomial;
use crate::scalar::Scalar;
use crate::word::{words_up_to, Word};

/// Generators of a two-sided ideal of the free algebra on `m` letters,
/// viewed through evaluation on `n x n` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    m: usize,
    n: usize,
    generators: Vec<TracePolynomial>,
}

impl IdealPresentation {
    pub fn new(m: usize, n: usize, generators: Vec<TracePolynomial>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(CoreError::Precondition("m and n must be positive".into()));
        }
        let mut lifted = Vec::with_capacity(generators.len());
        for g in generators {
            if !g.is_trace_free() {
                return Err(CoreError::NotTraceFree);
            }
            if g.m() != m {
                if g.used_generators() > m {
                    return Err(CoreError::GeneratorCountMismatch(g.m(), m));
                }
                lifted.push(g.with_generators(m)?);
            } else {
                lifted.push(g);
            }
        }
        Ok(IdealPresentation { m, n, generators: lifted })
    }

    pub fn parse(m: usize, n: usize, sources: &[&str]) -> Result<Self> {
        let limits = Limits::default();
        let gens = sources
            .iter()
            .map(|s| parse_with(s, m, Some(n), &limits))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, gens)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[TracePolynomial] {
        &self.generators
    }
}

/// Kernel of the evaluation map on words of length `<= degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointIdealBasis {
    pub degree_bound: usize,
    pub basis: Vec<TracePolynomial>,
    /// Number of words of length `<= degree_bound`.
    pub ambient_dim: usize,
    pub kernel_dim: usize,
    /// Rank of the joint evaluation map.
    pub rank: usize,
    pub representatives: Vec<usize>,
    pub duplicates: Vec<(usize, usize)>,
}

pub fn ideal_of_points(m: usize, n: usize, points: &[MatrixTuple], d: usize) -> Result<PointIdealBasis> {
    ideal_of_points_with(m, n, points, d, &Limits::default())
}

pub fn ideal_of_points_with(
    m: usize,
    n: usize,
    points: &[MatrixTuple],
    d: usize,
    limits: &Limits,
) -> Result<PointIdealBasis> {
    if m == 0 || n == 0 {
        return Err(CoreError::Precondition("m and n must be positive".into()));
    }
    check_points(points, m, n)?;
    let ambient: u128 = (0..=d as u32).map(|k| (m as u128).saturating_pow(k)).fold(0u128, u128::saturating_add);
    if ambient > limits.monomial_ceiling {
        return Err(CoreError::Resource {
            what: "words of bounded length",
            needed: ambient,
            ceiling: limits.monomial_ceiling,
        });
    }
    let (representatives, duplicates) = dedup_conjugates(points)?;
    let words: Vec<Word> = words_up_to(m, d).collect();
    let reps: Vec<&MatrixTuple> = representatives.iter().map(|&i| &points[i]).collect();
    let columns: Vec<Vec<Scalar>> = words
        .iter()
        .map(|w| reps.iter().flat_map(|a| word_value(w, a).entries().to_vec()).collect())
        .collect();
    let rows: Vec<Vec<Scalar>> = (0..reps.len() * n * n)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let kernel = solve_linear(&rows, words.len());
    let basis: Vec<TracePolynomial> = kernel
        .into_iter()
        .map(|v| TracePolynomial::from_word_terms(m, words.iter().cloned().zip(v)))
        .collect();
    Ok(PointIdealBasis {
        degree_bound: d,
        ambient_dim: words.len(),
        kernel_dim: basis.len(),
        rank: words.len() - basis.len(),
        basis,
        representatives,
        duplicates,
    })
}

fn word_value(w: &Word, a: &MatrixTuple) -> Matrix {
    w.letters()
        .iter()
        .fold(Matrix::identity(a.n()), |acc, &l| acc.mul_unchecked(a.get(l as usize)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "camelCase")]
pub enum NotSeparable {
    /// The target lies in the orbit of `points[point]`.
    Conjugate { point: usize, witness: Matrix },
    /// No kernel element up to `d_max` is nonzero at the target.
    #[serde(rename_all = "camelCase")]
    BoundExhausted { d_max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparationWitness {
    pub polynomial: TracePolynomial,
    pub degree_bound: usize,
    pub value_at_target: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum SeparationOutcome {
    Separated(SeparationWitness),
    NotSeparable(NotSeparable),
}

/// A polynomial vanishing on every point but not at `target`, searched by
/// increasing degree bound.
pub fn separate(points: &[MatrixTuple], target: &MatrixTuple, d_max: usize) -> Result<SeparationOutcome> {
    let m = target.m();
    let n = target.n();
    check_points(std::slice::from_ref(target), m, n)?;
    check_points(points, m, n)?;
    for (i, a) in points.iter().enumerate() {
        if let Some(g) = conjugate_test(a, target)?.witness {
            return Ok(SeparationOutcome::NotSeparable(NotSeparable::Conjugate { point: i, witness: g }));
        }
    }
    for d in 1..=d_max {
        let ideal = ideal_of_points(m, n, points, d)?;
        for p in ideal.basis {
            let value = Evaluator::new(&p).eval(target)?;
            if !value.is_zero() {
                return Ok(SeparationOutcome::Separated(SeparationWitness {
                    polynomial: p,
                    degree_bound: d,
                    value_at_target: value,
                }));
            }
        }
    }
    Ok(SeparationOutcome::NotSeparable(NotSeparable::BoundExhausted { d_max }))
}

/// Whether every generator of `J` vanishes at the generating point `a`.
pub fn zero_locus_member(ideal: &IdealPresentation, a: &MatrixTuple) -> Result<bool> {
    Ok(ideal_dichotomy(ideal, a)? == IdealImage::ZeroImage)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TargetVerdict {
    pub index: usize,
    /// Every basis element vanishes at the target.
    pub member: bool,
    /// First basis element that does not vanish, when not a member.
    pub witness: Option<TracePolynomial>,
    /// First point the target is conjugate to.
    pub conjugate_to: Option<usize>,
    pub agrees_with_conjugacy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentReport {
    pub m: usize,
    pub n: usize,
    pub ideal: PointIdealBasis,
    /// Every basis element vanishes at every input point.
    pub sound: bool,
    pub targets: Vec<TargetVerdict>,
    pub disagreements: usize,
    pub note: String,
}

pub fn nullstellensatz_experiment(
    points: &[MatrixTuple],
    targets: &[MatrixTuple],
    d: usize,
) -> Result<ExperimentReport> {
    let shape = points
        .first()
        .or(targets.first())
        .ok_or_else(|| CoreError::Precondition("no points and no targets".into()))?;
    let (m, n) = (shape.m(), shape.n());
    check_points(targets, m, n)?;
    let ideal = ideal_of_points(m, n, points, d)?;
    let evaluators: Vec<Evaluator> = ideal.basis.iter().map(Evaluator::new).collect();
    let mut sound = true;
    for a in points {
        for e in &evaluators {
            sound &= e.eval(a)?.is_zero();
        }
    }
    let verdicts = targets
        .par_iter()
        .enumerate()
        .map(|(index, t)| {
            let mut witness = None;
            for (e, p) in evaluators.iter().zip(&ideal.basis) {
                if !e.eval(t)?.is_zero() {
                    witness = Some(p.clone());
                    break;
                }
            }
            let mut conjugate_to = None;
            for (i, a) in points.iter().enumerate() {
                if conjugate_test(a, t)?.conjugate {
                    conjugate_to = Some(i);
                    break;
                }
            }
            let member = witness.is_none();
            Ok(TargetVerdict {
                index,
                member,
                witness,
                conjugate_to,
                agrees_with_conjugacy: member == conjugate_to.is_some(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let disagreements = verdicts.iter().filter(|v| !v.agrees_with_conjugacy).count();
    Ok(ExperimentReport {
        m,
        n,
        sound,
        disagreements,
        note: format!(
            "ideal truncated to words of length <= {d}; a member at this bound may still be separated at a higher one"
        ),
        ideal,
        targets: verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::scalar::int;

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(2, i - 1, j - 1)
    }

    fn pair(a: Matrix, b: Matrix) -> MatrixTuple {
        MatrixTuple::new(vec![a, b]).unwrap()
    }

    fn contains(basis: &[TracePolynomial], p: &TracePolynomial) -> bool {
        let words: Vec<Word> = words_up_to(2, 2).collect();
        let coords = |q: &TracePolynomial| -> Vec<Scalar> {
            words.iter().map(|w| q.coefficient(&crate::poly::MonomialKey::word(w.clone()))).collect()
        };
        let mut span = crate::linalg::SpanBasis::new(words.len());
        for b in basis {
            span.insert(coords(b));
        }
        span.contains(&coords(p))
    }

    #[test]
    fn ideal_of_one_orbit() {
        let a = pair(e(1, 2), e(2, 1));
        let d1 = ideal_of_points(2, 2, std::slice::from_ref(&a), 1).unwrap();
        assert_eq!((d1.ambient_dim, d1.kernel_dim, d1.rank), (3, 0, 3));
        let d2 = ideal_of_points(2, 2, &[a], 2).unwrap();
        assert_eq!((d2.ambient_dim, d2.kernel_dim, d2.rank), (7, 3, 4));
        for src in ["X1^2", "X2^2", "1 - X1*X2 - X2*X1"] {
            assert!(contains(&d2.basis, &parse(src, 2, None).unwrap()), "{src}");
        }
        assert!(!contains(&d2.basis, &parse("X1*X2", 2, None).unwrap()));
    }

    #[test]
    fn empty_point_set_gives_everything() {
        let b = ideal_of_points(2, 2, &[], 2).unwrap();
        assert_eq!(b.kernel_dim, 7);
        assert_eq!(b.basis[0], TracePolynomial::one(2));
    }

    #[test]
    fn conjugate_points_are_deduplicated() {
        let a = pair(e(1, 2), e(2, 1));
        let b = a.conjugate_by(&Matrix::from_ints(&[[1, 1], [0, 1]])).unwrap();
        let ideal = ideal_of_points(2, 2, &[a, b], 2).unwrap();
        assert_eq!(ideal.duplicates, vec![(1, 0)]);
        assert_eq!(ideal.kernel_dim, 3);
    }

    #[test]
    fn separation() {
        let a = pair(e(1, 2), e(2, 1));
        let t = pair(e(1, 2), e(2, 1).add(&e(1, 2)).unwrap());
        match separate(std::slice::from_ref(&a), &t, 2).unwrap() {
            SeparationOutcome::Separated(w) => {
                assert_eq!(w.polynomial, parse("X2^2", 2, None).unwrap());
                assert_eq!(w.value_at_target, Matrix::identity(2));
                assert_eq!(w.degree_bound, 2);
            }
            other => panic!("{other:?}"),
        }
        let swapped = pair(e(2, 1), e(1, 2));
        assert!(matches!(
            separate(std::slice::from_ref(&a), &swapped, 2).unwrap(),
            SeparationOutcome::NotSeparable(NotSeparable::Conjugate { point: 0, .. })
        ));
        match separate(&[], &a, 1).unwrap() {
            SeparationOutcome::Separated(w) => assert_eq!(w.polynomial, TracePolynomial::one(2)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            separate(&[a], &t, 1).unwrap(),
            SeparationOutcome::NotSeparable(NotSeparable::BoundExhausted { d_max: 1 })
        ));
    }

    #[test]
    fn zero_locus() {
        let j = IdealPresentation::parse(2, 2, &["X1*X2 + X2*X1", "X1^2 - 1", "X2^2 - 1"]).unwrap();
        let a = pair(e(1, 2).add(&e(2, 1)).unwrap(), Matrix::diag(&[int(1), int(-1)]));
        assert!(zero_locus_member(&j, &a).unwrap());
        assert!(!zero_locus_member(&j, &pair(e(1, 2), e(2, 1))).unwrap());
        let zero = IdealPresentation::new(2, 2, vec![TracePolynomial::zero(2)]).unwrap();
        assert!(zero_locus_member(&zero, &a).unwrap());
    }

    #[test]
    fn presentations_reject_traces() {
        assert_eq!(
            IdealPresentation::parse(1, 2, &["tr(X1)"]).unwrap_err(),
            CoreError::NotTraceFree
        );
    }

    #[test]
    fn experiment() {
        let a = pair(e(1, 2), e(2, 1));
        let conj = a.conjugate_by(&Matrix::from_ints(&[[1, 1], [0, 1]])).unwrap();
        let t = pair(e(1, 2), e(2, 1).add(&e(1, 2)).unwrap());
        let r = nullstellensatz_experiment(std::slice::from_ref(&a), &[conj, t, a.clone()], 2).unwrap();
        assert!(r.sound);
        assert_eq!(r.disagreements, 0);
        assert!(r.targets[0].member && r.targets[2].member);
        assert!(!r.targets[1].member);
        assert_eq!(r.targets[1].witness, Some(parse("X2^2", 2, None).unwrap()));
    }
}
