//! Polynomial identities and central polynomials of `M_n`.
//!
//! The deterministic identity test polarizes `p` into multilinear pieces;
//! a multilinear polynomial vanishes on `M_n` iff it vanishes whenever every
//! variable is a matrix unit, so each piece is swept over all `(n^2)^k`
//! unit assignments. The randomized test evaluates at seeded integer tuples.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::builtins::Builtin;
use crate::error::{CoreError, Result};
use crate::eval::{conjugate_test, generates, EvaluationReport, Evaluator, Ring};
use crate::limits::Limits;
use crate::linalg::{solve_affine, SpanBasis};
use crate::matrix::{Matrix, MatrixTuple};
use crate::multilinear::{components, polarizations, Polarization};
use crate::poly::TracePolynomial;
use crate::random;
use crate::scalar::{common_denominator, Scalar};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RequestedMode {
    Exact,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PiOptions {
    pub mode: RequestedMode,
    pub trials: u32,
    pub seed: u64,
    /// Random entries are uniform in `[-range, range]`.
    pub range: i64,
    /// When an exact check exceeds the substitution ceiling, fall back to
    /// the randomized test instead of failing.
    pub downgrade: bool,
    pub limits: Limits,
}

impl Default for PiOptions {
    fn default() -> Self {
        PiOptions {
            mode: RequestedMode::Exact,
            trials: 64,
            seed: 0,
            range: 1_000_000,
            downgrade: true,
            limits: Limits::default(),
        }
    }
}

impl PiOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn random(trials: u32, seed: u64) -> Self {
        PiOptions {
            mode: RequestedMode::Random,
            trials,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum VerdictMode {
    #[serde(rename_all = "camelCase")]
    Deterministic { substitutions: u128 },
    #[serde(rename_all = "camelCase")]
    Randomized { trials: u32, seed: u64, range: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PiVerdict {
    #[serde(rename = "isPI")]
    pub is_pi: bool,
    pub mode: VerdictMode,
    /// Set when an exact check was requested but ran randomized.
    pub downgraded: bool,
    /// Present iff `!is_pi`; evaluates to a nonzero matrix.
    pub witness: Option<MatrixTuple>,
    pub confidence: String,
}

/// Substitutions an exhaustive check would need:
/// `sum over components of (n^2)^(#fresh variables) * #polarized terms`.
pub fn deterministic_cost(p: &TracePolynomial, n: usize) -> Result<u128> {
    let mut total = BigUint::zero();
    for (degrees, words) in components(p)? {
        let vars: usize = degrees.iter().sum();
        let per_word: BigUint = degrees.iter().flat_map(|&d| 1..=d).map(BigUint::from).product();
        total += BigUint::from(n * n).pow(vars as u32) * per_word * BigUint::from(words.len());
    }
    Ok(total.to_u128().unwrap_or(u128::MAX))
}

/// Decides whether a trace-free `p` is a polynomial identity of `M_n`.
pub fn is_pi(p: &TracePolynomial, n: usize, opts: &PiOptions) -> Result<PiVerdict> {
    if !p.is_trace_free() {
        return Err(CoreError::NotTraceFree);
    }
    if n == 0 {
        return Err(CoreError::Precondition("matrix size must be positive".into()));
    }
    match opts.mode {
        RequestedMode::Random => randomized(p, n, opts, false),
        RequestedMode::Exact => {
            let cost = deterministic_cost(p, n)?;
            let terms = crate::multilinear::polarized_term_count(p)?;
            let ceiling = opts.limits.substitution_ceiling;
            if cost <= ceiling && terms <= opts.limits.monomial_ceiling {
                deterministic(p, n, cost, opts)
            } else if opts.downgrade {
                randomized(p, n, opts, true)
            } else {
                Err(CoreError::Resource {
                    what: "matrix-unit substitutions",
                    needed: cost,
                    ceiling,
                })
            }
        }
    }
}

/// A multilinear polynomial over integers, ready for unit sweeps.
struct UnitSweep {
    vars: usize,
    words: Vec<(Vec<Letter>, BigInt)>,
}

impl UnitSweep {
    fn new(q: &TracePolynomial) -> Self {
        let d = Scalar::from_integer(common_denominator(q.terms().values()));
        let words = q
            .word_terms()
            .expect("polarizations are trace-free")
            .into_iter()
            .map(|(w, c)| (w.letters().to_vec(), (c * &d).to_integer()))
            .collect();
        UnitSweep { vars: q.m(), words }
    }

    fn assignment(&self, n: usize, mut index: u128) -> Vec<(usize, usize)> {
        let units = (n * n) as u128;
        let mut out = vec![(0, 0); self.vars];
        for slot in out.iter_mut().rev() {
            let u = (index % units) as usize;
            *slot = (u / n, u % n);
            index /= units;
        }
        out
    }

    fn value<R: Ring>(&self, n: usize, units: &[(usize, usize)]) -> Option<Vec<R>> {
        let mut acc = vec![R::r_zero(); n * n];
        for (w, c) in &self.words {
            let (row, col) = match w.split_first() {
                None => {
                    for i in 0..n {
                        acc[i * n + i] = acc[i * n + i].r_add(&R::from_int(c)?)?;
                    }
                    continue;
                }
                Some((&first, rest)) => {
                    let mut col = units[first as usize].1;
                    let mut chained = true;
                    for &l in rest {
                        let (r, c2) = units[l as usize];
                        if r != col {
                            chained = false;
                            break;
                        }
                        col = c2;
                    }
                    if !chained {
                        continue;
                    }
                    (units[first as usize].0, col)
                }
            };
            acc[row * n + col] = acc[row * n + col].r_add(&R::from_int(c)?)?;
        }
        Some(acc)
    }

    fn nonzero_at(&self, n: usize, index: u128) -> bool {
        let units = self.assignment(n, index);
        match self.value::<i128>(n, &units) {
            Some(v) => v.iter().any(|x| *x != 0),
            None => self.value::<BigInt>(n, &units).expect("no overflow").iter().any(|x| !x.is_zero()),
        }
    }

    /// First unit assignment (in index order) with a nonzero value.
    fn first_nonzero(&self, n: usize) -> Option<u128> {
        let total = ((n * n) as u128).pow(self.vars as u32);
        if total <= u64::MAX as u128 {
            (0..total as u64).into_par_iter().find_first(|&i| self.nonzero_at(n, i as u128)).map(u128::from)
        } else {
            (0..total).find(|&i| self.nonzero_at(n, i))
        }
    }
}

fn deterministic(p: &TracePolynomial, n: usize, cost: u128, opts: &PiOptions) -> Result<PiVerdict> {
    let mode = VerdictMode::Deterministic { substitutions: cost };
    for pol in polarizations(p, &opts.limits)? {
        let sweep = UnitSweep::new(&pol.poly);
        if let Some(index) = sweep.first_nonzero(n) {
            let units = sweep.assignment(n, index);
            let witness = witness_from_units(p, n, &pol, &units, opts)?;
            return Ok(PiVerdict {
                is_pi: false,
                mode,
                downgraded: false,
                witness: Some(witness),
                confidence: "certain: a multilinear component is nonzero at a matrix-unit substitution".into(),
            });
        }
    }
    Ok(PiVerdict {
        is_pi: true,
        mode,
        downgraded: false,
        witness: None,
        confidence: "certain: every multilinear component vanishes on all matrix-unit substitutions".into(),
    })
}

/// Turns a nonzero unit substitution of a polarized component into a point
/// where `p` itself is nonzero. Plain unit tuples are tried first; then
/// `a_i = sum_j t_ij u_ij` over the fresh copies of `x_i`, whose value is a
/// polynomial in the `t`'s with the nonzero component value as the
/// coefficient of `prod t_ij`.
fn witness_from_units(
    p: &TracePolynomial,
    n: usize,
    pol: &Polarization,
    units: &[(usize, usize)],
    opts: &PiOptions,
) -> Result<MatrixTuple> {
    let m = p.m();
    let eval = Evaluator::new(p);
    let nn = n * n;
    let direct = (nn as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if direct.saturating_mul(p.len() as u128) <= opts.limits.substitution_ceiling {
        for index in 0..direct {
            let mut idx = index;
            let mut mats = vec![Matrix::zero(n); m];
            for slot in mats.iter_mut().rev() {
                let u = (idx % nn as u128) as usize;
                *slot = Matrix::unit(n, u / n, u % n);
                idx /= nn as u128;
            }
            let a = MatrixTuple::new(mats)?;
            if !eval.eval(&a)?.is_zero() {
                return Ok(a);
            }
        }
    }
    let mut rng = random::rng(opts.seed ^ 0x5eed_0fa1);
    for attempt in 0..256 {
        let mut mats = vec![Matrix::zero(n); m];
        for (k, &(r, c)) in units.iter().enumerate() {
            let t: i64 = if attempt == 0 { 1 } else { rng.gen_range(1..=1000) };
            let owner = pol.owner[k];
            mats[owner] = mats[owner].add_unchecked(&Matrix::unit(n, r, c).scale(&crate::scalar::int(t)));
        }
        let a = MatrixTuple::new(mats)?;
        if !eval.eval(&a)?.is_zero() {
            return Ok(a);
        }
    }
    Err(CoreError::Inconsistency("no witness found for a nonzero multilinear component".into()))
}

fn randomized(p: &TracePolynomial, n: usize, opts: &PiOptions, downgraded: bool) -> Result<PiVerdict> {
    let mode = VerdictMode::Randomized {
        trials: opts.trials,
        seed: opts.seed,
        range: opts.range,
    };
    let eval = Evaluator::new(p);
    let mut rng = random::rng(opts.seed);
    let m = p.m().max(1);
    for _ in 0..opts.trials {
        let a = random::integer_tuple(&mut rng, m, n, opts.range);
        if !eval.eval(&a)?.is_zero() {
            return Ok(PiVerdict {
                is_pi: false,
                mode,
                downgraded,
                witness: Some(a),
                confidence: "certain: the witness evaluates to a nonzero matrix".into(),
            });
        }
    }
    Ok(PiVerdict {
        is_pi: true,
        mode,
        downgraded,
        witness: None,
        confidence: schwartz_zippel_note(p.degree(), opts.trials, opts.range),
    })
}

fn schwartz_zippel_note(degree: usize, trials: u32, range: i64) -> String {
    let set = 2.0 * range as f64 + 1.0;
    let per_trial = (degree as f64 / set).min(1.0);
    let log10 = if per_trial == 0.0 { f64::NEG_INFINITY } else { trials as f64 * per_trial.log10() };
    format!(
        "probable: {trials} trials with entries uniform in [-{range}, {range}]; a non-identity of degree {degree} \
         survives one trial with probability <= {degree}/{set} and all trials with probability <= 10^{log10:.1}"
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CentralityChecks {
    pub constant_term_zero: bool,
    /// Identity check for `M_(n-1)`; absent when `n = 1`.
    pub pi_for_smaller: Option<PiVerdict>,
    /// Identity check of `p x_(m+1) - x_(m+1) p` on `M_n`.
    pub evaluations_central: PiVerdict,
    /// Identity check of `p` on `M_n`; must fail.
    pub not_identically_zero: PiVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CentralityVerdict {
    pub is_central: bool,
    pub checks: CentralityChecks,
}

pub fn is_central(p: &TracePolynomial, n: usize, opts: &PiOptions) -> Result<CentralityVerdict> {
    if !p.is_trace_free() {
        return Err(CoreError::NotTraceFree);
    }
    let m = p.m();
    let extended = p.with_generators(m + 1)?;
    let fresh = TracePolynomial::generator(m + 1, m + 1)?;
    let commutator = extended
        .mul_with(&fresh, &opts.limits)?
        .sub(&fresh.mul_with(&extended, &opts.limits)?)?;
    let constant_term_zero = p.constant_coefficient().is_zero();
    let evaluations_central = is_pi(&commutator, n, opts)?;
    let not_identically_zero = is_pi(p, n, opts)?;
    let pi_for_smaller = if n >= 2 { Some(is_pi(p, n - 1, opts)?) } else { None };

    let central_nonzero = evaluations_central.is_pi && !not_identically_zero.is_pi;
    let by_constant_term = constant_term_zero && central_nonzero;
    if let Some(smaller) = &pi_for_smaller {
        let by_smaller = smaller.is_pi && central_nonzero;
        if by_smaller != by_constant_term {
            return Err(CoreError::Inconsistency(format!(
                "centrality routes disagree for n={n}: zero constant term gives {by_constant_term}, \
                 identity of M_{} gives {by_smaller}",
                n - 1
            )));
        }
    }
    let is_central = by_constant_term && pi_for_smaller.as_ref().is_none_or(|v| v.is_pi);
    Ok(CentralityVerdict {
        is_central,
        checks: CentralityChecks {
            constant_term_zero,
            pi_for_smaller,
            evaluations_central,
            not_identically_zero,
        },
    })
}

/// The candidate used by [`construct_central`] before verification.
pub fn central_candidate(n: usize) -> Result<TracePolynomial> {
    match n {
        0 => Err(CoreError::Precondition("matrix size must be positive".into())),
        1 => TracePolynomial::generator(1, 1),
        2 => Builtin::CommutatorSquare.polynomial(),
        _ => Builtin::Formanek(n).polynomial(),
    }
}

/// A verified central polynomial for `n x n` matrices.
pub fn construct_central(n: usize, opts: &PiOptions) -> Result<(TracePolynomial, CentralityVerdict)> {
    let c = central_candidate(n)?;
    let verdict = is_central(&c, n, opts)?;
    if !verdict.is_central {
        return Err(CoreError::VerificationFailed(format!("candidate central polynomial for n={n} failed: {c}")));
    }
    Ok((c, verdict))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CentralForPoints {
    /// `s = c(p_1, ..., p_N)`.
    pub s: TracePolynomial,
    pub base: TracePolynomial,
    pub base_verdict: CentralityVerdict,
    /// `b_1..b_N` with `c(b) != 0`.
    pub targets: Vec<Matrix>,
    /// How the targets were found: `unit-search` or `random(seed=..)`.
    pub target_search: String,
    /// `p_j` with `p_j(A_i) = b_j` at every representative `A_i`.
    pub interpolants: Vec<TracePolynomial>,
    /// Indices of the orbit representatives kept.
    pub representatives: Vec<usize>,
    /// `(duplicate, representative)` pairs removed as conjugates.
    pub duplicates: Vec<(usize, usize)>,
    /// Words enumerated before the joint evaluation span was full.
    pub words_enumerated: usize,
    /// `s` at every input point, duplicates included.
    pub reports: Vec<EvaluationReport>,
}

/// Representative indices and `(duplicate, representative)` pairs.
pub type Orbits = (Vec<usize>, Vec<(usize, usize)>);

/// Orbit representatives (by exact conjugacy) and `(duplicate, rep)` pairs.
pub fn dedup_conjugates(points: &[MatrixTuple]) -> Result<Orbits> {
    let mut reps: Vec<usize> = Vec::new();
    let mut dups = Vec::new();
    'outer: for (i, a) in points.iter().enumerate() {
        for &r in &reps {
            if conjugate_test(&points[r], a)?.conjugate {
                dups.push((i, r));
                continue 'outer;
            }
        }
        reps.push(i);
    }
    Ok((reps, dups))
}

pub(crate) fn check_points(points: &[MatrixTuple], m: usize, n: usize) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if a.m() != m || a.n() != n {
            return Err(CoreError::Precondition(format!(
                "point {i} has shape (m={}, n={}), expected (m={m}, n={n})",
                a.m(),
                a.n()
            )));
        }
        if !generates(a) {
            return Err(CoreError::Precondition(format!("point {i} does not generate M_{n}")));
        }
    }
    Ok(())
}

fn find_targets(c: &TracePolynomial, n: usize, seed: u64, limits: &Limits) -> Result<(Vec<Matrix>, String)> {
    let vars = c.m();
    let eval = Evaluator::new(c);
    let nn = (n * n) as u128;
    let unit_tuples = nn.checked_pow(vars as u32).unwrap_or(u128::MAX).min(limits.substitution_ceiling / 1000 + 1);
    for index in 0..unit_tuples {
        let mut idx = index;
        let mut mats = vec![Matrix::zero(n); vars];
        for slot in mats.iter_mut().rev() {
            let u = (idx % nn) as usize;
            *slot = Matrix::unit(n, u / n, u % n);
            idx /= nn;
        }
        let b = MatrixTuple::new(mats)?;
        if !eval.eval(&b)?.is_zero() {
            return Ok((b.matrices().to_vec(), "unit-search".into()));
        }
    }
    let mut rng = random::rng(seed);
    for _ in 0..10_000 {
        let b = random::integer_tuple(&mut rng, vars, n, 3);
        if !eval.eval(&b)?.is_zero() {
            return Ok((b.matrices().to_vec(), format!("random(seed={seed})")));
        }
    }
    Err(CoreError::VerificationFailed("no point found where the central polynomial is nonzero".into()))
}

/// A central polynomial nonzero at every given generating point, built by
/// substituting interpolating polynomials into a verified central
/// polynomial. Interpolants come from the span of words in graded-lex
/// order, grown until the joint evaluation map onto one copy of `M_n` per
/// orbit is surjective.
pub fn central_for_points(points: &[MatrixTuple], n: usize, opts: &PiOptions) -> Result<CentralForPoints> {
    let first = points
        .first()
        .ok_or_else(|| CoreError::Precondition("at least one point is required".into()))?;
    let m = first.m();
    check_points(points, m, n)?;
    let (representatives, duplicates) = dedup_conjugates(points)?;
    let (base, base_verdict) = construct_central(n, opts)?;
    let (targets, target_search) = find_targets(&base, n, opts.seed, &opts.limits)?;

    let reps: Vec<&MatrixTuple> = representatives.iter().map(|&i| &points[i]).collect();
    let nn = n * n;
    let dim = reps.len() * nn;
    let mut span = SpanBasis::new(dim);
    let mut words: Vec<Word> = Vec::new();
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    // values[k][i] = current-level word k evaluated at representative i
    let mut level: Vec<(Word, Vec<Matrix>)> = vec![(Word::empty(), reps.iter().map(|_| Matrix::identity(n)).collect())];
    'grow: loop {
        let mut grew = false;
        for (w, vals) in &level {
            let column: Vec<Scalar> = vals.iter().flat_map(|v| v.entries().iter().cloned()).collect();
            grew |= span.insert(column.clone());
            words.push(w.clone());
            columns.push(column);
            if words.len() as u128 > opts.limits.monomial_ceiling {
                return Err(CoreError::Resource {
                    what: "interpolation words",
                    needed: words.len() as u128,
                    ceiling: opts.limits.monomial_ceiling,
                });
            }
            if span.is_full() {
                break 'grow;
            }
        }
        if !grew && !level[0].0.is_empty() {
            return Err(CoreError::Inconsistency(format!(
                "joint evaluation span stabilized at {} < {dim}; conjugate points escaped deduplication",
                span.rank()
            )));
        }
        level = level
            .iter()
            .flat_map(|(w, vals)| {
                let reps = &reps;
                (0..m).map(move |l| {
                    let next_word = w.concat(&Word::letter(l as Letter));
                    let next_vals = vals.iter().zip(reps.iter()).map(|(v, a)| v.mul_unchecked(a.get(l))).collect();
                    (next_word, next_vals)
                })
            })
            .collect();
    }

    // Row-major system: one equation per coordinate, one unknown per word.
    let rows: Vec<Vec<Scalar>> = (0..dim).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let mut interpolants = Vec::with_capacity(targets.len());
    for b in &targets {
        let rhs: Vec<Scalar> = (0..reps.len()).flat_map(|_| b.entries().iter().cloned()).collect();
        let x = solve_affine(&rows, &rhs, words.len())
            .ok_or_else(|| CoreError::Inconsistency("full-rank interpolation system has no solution".into()))?;
        interpolants.push(TracePolynomial::from_word_terms(m, words.iter().cloned().zip(x)));
    }
    let s = base.substitute(&interpolants, &opts.limits)?;
    let eval = Evaluator::new(&s);
    let reports = points.iter().map(|a| eval.report(a)).collect::<Result<Vec<_>>>()?;
    if let Some(bad) = reports.iter().position(|r| !r.is_nonzero_scalar()) {
        return Err(CoreError::VerificationFailed(format!("s is not a nonzero scalar at point {bad}")));
    }
    Ok(CentralForPoints {
        s,
        base,
        base_verdict,
        targets,
        target_search,
        interpolants,
        representatives,
        duplicates,
        words_enumerated: words.len(),
        reports,
    })
}
