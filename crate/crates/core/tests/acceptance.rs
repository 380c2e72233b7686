//! Acceptance suite. Run with
//! `cargo test -p nvar-core --test acceptance -- --nocapture`
//! to see one pass/fail line per criterion.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;

use nvar_core::builtins::{standard, Builtin};
use nvar_core::central::{central_for_points, construct_central, is_central, is_pi, PiOptions, VerdictMode};
use nvar_core::eval::{conjugate_test, evaluate, generates, Evaluator};
use nvar_core::invariants::{default_max_len, friedland, separated_by_fingerprint, Separation};
use nvar_core::linalg::SpanBasis;
use nvar_core::matrix::{Matrix, MatrixTuple};
use nvar_core::nullstellensatz::{ideal_of_points, nullstellensatz_experiment, separate, SeparationOutcome};
use nvar_core::poly::{MonomialKey, TracePolynomial};
use nvar_core::random::{generating_tuple, integer_tuple, invertible_matrix, rng};
use nvar_core::scalar::Scalar;
use nvar_core::word::{words_up_to, Word};
use nvar_core::parse;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    check(spent < budget, || format!("took {spent:.2?}, budget {budget:?}"))
}

fn e(i: usize, j: usize) -> Matrix {
    Matrix::unit(2, i - 1, j - 1)
}

fn pair(a: Matrix, b: Matrix) -> MatrixTuple {
    MatrixTuple::new(vec![a, b]).unwrap()
}

fn friedland_agrees_with_generation() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut generating = 0;
    for i in 0..1000 {
        let a = integer_tuple(&mut r, 2, 2, 5);
        let f = friedland(&a).map_err(|e| e.to_string())?;
        let g = generates(&a);
        check(!f.is_zero() == g, || format!("pair {i} disagrees: friedland = {f}, generates = {g}"))?;
        generating += g as usize;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("1000 pairs, {generating} generating, 0 disagreements"))
}

fn amitsur_levitzki() -> Outcome {
    let start = Instant::now();
    let v = is_pi(&standard(4), 2, &PiOptions::exact()).map_err(|e| e.to_string())?;
    check(v.is_pi, || "std(4) reported as non-identity".into())?;
    let subs = match v.mode {
        VerdictMode::Deterministic { substitutions } if !v.downgraded => substitutions,
        _ => return Err("std(4) check was not deterministic".into()),
    };
    let v = is_pi(&standard(3), 2, &PiOptions::exact()).map_err(|e| e.to_string())?;
    check(!v.is_pi, || "std(3) reported as identity".into())?;
    let w = v.witness.ok_or("no witness for std(3)")?;
    let value = evaluate(&standard(3), &w).map_err(|e| e.to_string())?;
    check(!value.is_zero, || "std(3) witness evaluates to zero".into())?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("std(4) identity after {subs} unit substitutions; std(3) witness re-verified"))
}

fn central_polynomial_verifier() -> Outcome {
    let start = Instant::now();
    let comm_sq = Builtin::CommutatorSquare.polynomial().map_err(|e| e.to_string())?;
    let v = is_central(&comm_sq, 2, &PiOptions::exact()).map_err(|e| e.to_string())?;
    check(v.is_central, || "comm_sq is not central at n=2".into())?;
    let x1 = TracePolynomial::generator(1, 1).unwrap();
    let v = is_central(&x1, 2, &PiOptions::exact()).map_err(|e| e.to_string())?;
    check(!v.is_central, || "x1 reported central at n=2".into())?;

    let seed = 20_240_601;
    let opts = PiOptions::random(128, seed);
    let (c, verdict) = construct_central(3, &opts).map_err(|e| e.to_string())?;
    check(verdict.is_central, || "construct_central(3) failed verification".into())?;

    // [c, x_(m+1)] at 10^4 seeded integer tuples in M_3, small entries.
    let m = c.m();
    let fresh = TracePolynomial::generator(m + 1, m + 1).unwrap();
    let lifted = c.with_generators(m + 1).unwrap();
    let bracket = lifted.mul(&fresh).unwrap().sub(&fresh.mul(&lifted).unwrap()).unwrap();
    let eval = Evaluator::new(&bracket);
    let c_eval = Evaluator::new(&c);
    let mut r = rng(seed);
    let mut nonzero_values = 0;
    for i in 0..10_000 {
        let a = integer_tuple(&mut r, m + 1, 3, 3);
        let value = eval.eval(&a).map_err(|e| e.to_string())?;
        check(value.is_zero(), || format!("[c, x{}] nonzero at spot-check tuple {i}", m + 1))?;
        if i < 200 {
            let head = MatrixTuple::new(a.matrices()[..m].to_vec()).unwrap();
            let cv = c_eval.report(&head).map_err(|e| e.to_string())?;
            check(cv.is_scalar, || format!("c is not scalar at spot-check tuple {i}"))?;
            nonzero_values += !cv.is_zero as usize;
        }
    }
    check(nonzero_values > 0, || "c vanished at every spot-check tuple".into())?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "comm_sq central, x1 not; n=3 candidate with {} terms verified (128 trials, seed {seed}); 10^4 spot checks clean",
        c.len()
    ))
}

fn central_for_points_constructor() -> Outcome {
    let start = Instant::now();
    let mut total_dups = 0;
    for run in 0..50u64 {
        let mut r = rng(1000 + run);
        let count = 1 + (run % 3) as usize;
        let mut points: Vec<MatrixTuple> = Vec::new();
        while points.len() < count {
            let a = generating_tuple(&mut r, 2, 2, 3);
            let fresh = points.iter().all(|b| !conjugate_test(b, &a).unwrap().conjugate);
            if fresh {
                points.push(a);
            }
        }
        let mut expected_dups = Vec::new();
        if run % 2 == 0 {
            let src = r.gen_range(0..points.len());
            let g = invertible_matrix(&mut r, 2, 3);
            expected_dups.push((points.len(), src));
            points.push(points[src].conjugate_by(&g).unwrap());
        }
        let opts = PiOptions { seed: run, ..PiOptions::exact() };
        let out = central_for_points(&points, 2, &opts).map_err(|e| format!("run {run}: {e}"))?;
        check(out.duplicates == expected_dups, || {
            format!("run {run}: duplicates {:?}, expected {expected_dups:?}", out.duplicates)
        })?;
        for (i, a) in points.iter().enumerate() {
            let rep = evaluate(&out.s, a).map_err(|e| e.to_string())?;
            check(rep.is_nonzero_scalar(), || format!("run {run}: s is not a nonzero scalar at point {i}"))?;
        }
        total_dups += expected_dups.len();
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 runs, every s(A_i) a nonzero scalar; {total_dups} injected duplicates collapsed"))
}

fn conjugacy_coherence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(5);
    let mut distinct = 0;
    for i in 0..500 {
        let n = 2 + i % 2;
        let a = generating_tuple(&mut r, 2, n, 3);
        let g = invertible_matrix(&mut r, n, 3);
        let h = invertible_matrix(&mut r, n, 3);
        let b = a.conjugate_by(&g).unwrap();
        let c = b.conjugate_by(&h).unwrap();
        let test = |x: &MatrixTuple, y: &MatrixTuple| conjugate_test(x, y).map_err(|e| format!("pair {i}: {e}"));
        check(test(&a, &a)?.conjugate, || format!("pair {i}: not reflexive"))?;
        let ab = test(&a, &b)?;
        let ba = test(&b, &a)?;
        let ac = test(&a, &c)?;
        check(ab.conjugate && ba.conjugate, || format!("pair {i}: not symmetric"))?;
        check(ac.conjugate, || format!("pair {i}: not transitive"))?;
        for cert in [&ab, &ba, &ac] {
            check(cert.intertwiner_dim == 1, || format!("pair {i}: intertwiner dimension {}", cert.intertwiner_dim))?;
            let w = cert.witness.as_ref().ok_or_else(|| format!("pair {i}: missing witness"))?;
            check(w.is_invertible(), || format!("pair {i}: singular witness"))?;
        }
        check(a.conjugate_by(ab.witness.as_ref().unwrap()).unwrap() == b, || {
            format!("pair {i}: witness does not conjugate")
        })?;
        let d = generating_tuple(&mut r, 2, n, 3);
        let fp = separated_by_fingerprint(&a, &d, default_max_len(n)).map_err(|e| e.to_string())?;
        let ad = test(&a, &d)?;
        if fp == Separation::Distinct {
            distinct += 1;
            check(!ad.conjugate, || format!("pair {i}: distinct fingerprints but conjugate"))?;
        }
        let fp_same = separated_by_fingerprint(&a, &c, default_max_len(n)).map_err(|e| e.to_string())?;
        check(fp_same == Separation::Indistinguishable, || format!("pair {i}: conjugates have distinct fingerprints"))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("500 families coherent; {distinct} fingerprint separations, 0 violations"))
}

fn in_span(basis: &[TracePolynomial], p: &TracePolynomial, words: &[Word]) -> bool {
    let coords = |q: &TracePolynomial| -> Vec<Scalar> {
        words.iter().map(|w| q.coefficient(&MonomialKey::word(w.clone()))).collect()
    };
    let mut span = SpanBasis::new(words.len());
    for b in basis {
        span.insert(coords(b));
    }
    span.contains(&coords(p))
}

fn nullstellensatz_lab() -> Outcome {
    let start = Instant::now();
    let a = pair(e(1, 2), e(2, 1));
    let ideal = ideal_of_points(2, 2, std::slice::from_ref(&a), 2).map_err(|e| e.to_string())?;
    check(ideal.kernel_dim == 3, || format!("kernelDim {} at d=2", ideal.kernel_dim))?;
    let words: Vec<Word> = words_up_to(2, 2).collect();
    for src in ["X1^2", "X2^2", "1 - X1*X2 - X2*X1"] {
        let p = parse(src, 2, None).unwrap();
        check(in_span(&ideal.basis, &p, &words), || format!("{src} not in the degree-2 ideal"))?;
    }
    let target = pair(e(1, 2), e(2, 1).add(&e(1, 2)).unwrap());
    let witness = match separate(std::slice::from_ref(&a), &target, 2).map_err(|e| e.to_string())? {
        SeparationOutcome::Separated(w) => w,
        other => return Err(format!("no separating witness: {other:?}")),
    };

    let mut r = rng(6);
    let other = generating_tuple(&mut r, 2, 2, 3);
    let points = vec![a, other];
    let mut targets = Vec::new();
    for k in 0..100 {
        if k % 2 == 0 {
            let g = invertible_matrix(&mut r, 2, 4);
            targets.push(points[k % 4 / 2].conjugate_by(&g).unwrap());
        } else {
            targets.push(generating_tuple(&mut r, 2, 2, 3));
        }
    }
    let report = nullstellensatz_experiment(&points, &targets, 3).map_err(|e| e.to_string())?;
    check(report.sound, || "an ideal element fails to vanish on a point".into())?;
    check(report.disagreements == 0, || format!("{} membership disagreements", report.disagreements))?;
    let members = report.targets.iter().filter(|t| t.member).count();
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "kernelDim 3; witness {} at d={}; 100 targets ({members} members) agree with conjugacy at d=3",
        witness.polynomial, witness.degree_bound
    ))
}

fn payloads(seed: u64) -> Vec<String> {
    let json = |v: serde_json::Result<String>| v.unwrap();
    let mut out = Vec::new();
    out.push(json(serde_json::to_string(&is_pi(&standard(3), 2, &PiOptions::random(16, seed)).unwrap())));
    out.push(json(serde_json::to_string(&is_pi(&standard(4), 2, &PiOptions::random(16, seed)).unwrap())));
    let (c, v) = construct_central(3, &PiOptions::random(8, seed)).unwrap();
    out.push(c.to_string());
    out.push(json(serde_json::to_string(&v)));
    let mut r = rng(seed);
    let points: Vec<MatrixTuple> = (0..2).map(|_| generating_tuple(&mut r, 2, 2, 3)).collect();
    if !conjugate_test(&points[0], &points[1]).unwrap().conjugate {
        let opts = PiOptions { seed, ..PiOptions::exact() };
        out.push(json(serde_json::to_string(&central_for_points(&points, 2, &opts).unwrap())));
    }
    let targets: Vec<MatrixTuple> = (0..6).map(|_| generating_tuple(&mut r, 2, 2, 3)).collect();
    out.push(json(serde_json::to_string(&nullstellensatz_experiment(&points, &targets, 2).unwrap())));
    out
}

fn determinism() -> Outcome {
    let start = Instant::now();
    for seed in [3u64, 17, 99] {
        let first = payloads(seed);
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let replay = serial.install(|| payloads(seed));
        check(first == replay, || format!("seed {seed}: replay differs"))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok("3 seeds replayed on 1 thread and on the default pool: identical payloads".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 friedland vs generation", friedland_agrees_with_generation),
        ("2 standard identities at n=2", amitsur_levitzki),
        ("3 central polynomial verifier", central_polynomial_verifier),
        ("4 central polynomial through points", central_for_points_constructor),
        ("5 conjugacy coherence", conjugacy_coherence),
        ("6 point ideals and separation", nullstellensatz_lab),
        ("7 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let spent = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({spent:.2?}): {detail}"),
            Err(why) => {
                println!("[FAIL] {name} ({spent:.2?}): {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
