use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use nvar_core::central::{central_for_points, construct_central, is_central, is_pi, PiOptions, RequestedMode};
use nvar_core::eval::{conjugate_test, evaluate, generates, span_chain, CONJUGACY_SCOPE};
use nvar_core::invariants::{default_max_len, fingerprint, friedland};
use nvar_core::nullstellensatz::{ideal_of_points_with, nullstellensatz_experiment, separate, zero_locus_member};
use nvar_core::parse::parse_expr;
use nvar_core::scalar::format_scalar;
use nvar_core::tuple_file::tuples_from_json;
use nvar_core::{Builtin, CoreError, IdealPresentation, Limits, MatrixTuple, TracePolynomial, BUILTIN_NAMES};

use crate::{Command, Failure, Mode, PolyArgs, RandomArgs};

type Outcome = Result<(Value, Option<u64>), Failure>;

fn read_tuples(path: &Path) -> Result<(Vec<MatrixTuple>, bool), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let single = !text.trim_start().starts_with('[');
    Ok((tuples_from_json(&text)?, single))
}

fn read_one(path: &Path) -> Result<MatrixTuple, Failure> {
    let (mut tuples, _) = read_tuples(path)?;
    if tuples.len() != 1 {
        return Err(Failure::Input(format!("{} must hold exactly one tuple", path.display())));
    }
    Ok(tuples.remove(0))
}

/// One result for a single-object file, an array otherwise.
fn per_tuple(single: bool, mut items: Vec<Value>) -> Value {
    if single && items.len() == 1 {
        items.remove(0)
    } else {
        Value::Array(items)
    }
}

fn polynomial(args: &PolyArgs, m: Option<usize>, n: Option<usize>, limits: &Limits) -> Result<TracePolynomial, Failure> {
    let m = args.m.or(m);
    let p = match (&args.expr, &args.builtin) {
        (Some(src), None) => {
            let m = match m {
                Some(m) => m,
                None => parse_expr(src)?.max_generator().max(1),
            };
            nvar_core::parse_with(src, m, n, limits)?
        }
        (None, Some(name)) => name.parse::<Builtin>()?.polynomial()?,
        _ => return Err(Failure::Input("give exactly one of --expr and --builtin".into())),
    };
    match m {
        Some(m) if m != p.m() => Ok(p.with_generators(m)?),
        _ => Ok(p),
    }
}

fn options(args: &RandomArgs, limits: &Limits) -> PiOptions {
    PiOptions {
        mode: match args.mode {
            Mode::Exact => RequestedMode::Exact,
            Mode::Random => RequestedMode::Random,
        },
        trials: args.trials,
        seed: args.seed,
        downgrade: !args.strict,
        limits: *limits,
        ..PiOptions::default()
    }
}

fn seed_of(args: &RandomArgs) -> Option<u64> {
    (args.mode == Mode::Random).then_some(args.seed)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

pub(crate) fn run(command: &Command, limits: &Limits) -> Outcome {
    match command {
        Command::Eval(args) => {
            let (tuples, single) = read_tuples(&args.tuple)?;
            let first = tuples.first().ok_or_else(|| Failure::Input("no tuples given".into()))?;
            let p = polynomial(&args.poly, Some(first.m()), Some(first.n()), limits)?;
            let reports = tuples
                .par_iter()
                .map(|a| evaluate(&p, a).map(|r| to_value(&r)))
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok((per_tuple(single, reports), None))
        }
        Command::Generates(args) => {
            let (tuples, single) = read_tuples(&args.tuple)?;
            let items = tuples
                .par_iter()
                .map(|a| json!({"generates": generates(a), "spanChain": span_chain(a)}))
                .collect();
            Ok((per_tuple(single, items), None))
        }
        Command::Conjugate(args) => {
            let a = read_one(&args.tuple)?;
            let b = read_one(&args.target)?;
            let cert = conjugate_test(&a, &b)?;
            Ok((
                json!({
                    "conjugate": cert.conjugate,
                    "intertwinerDim": cert.intertwiner_dim,
                    "witness": cert.witness,
                    "scope": CONJUGACY_SCOPE,
                }),
                None,
            ))
        }
        Command::Fingerprint(args) => {
            let (tuples, single) = read_tuples(&args.tuple)?;
            let items = tuples
                .par_iter()
                .map(|a| {
                    let max_len = args.maxlen.unwrap_or_else(|| default_max_len(a.n()));
                    let fp = fingerprint(a, max_len);
                    let values: Vec<Value> = fp
                        .values
                        .iter()
                        .map(|(k, v)| json!([k.word().to_string(), format_scalar(v)]))
                        .collect();
                    let mut out = json!({"n": fp.n, "m": fp.m, "maxLen": fp.max_len, "values": values});
                    if let Ok(c) = friedland(a) {
                        out["friedland"] = json!(format_scalar(&c));
                    }
                    out
                })
                .collect();
            Ok((per_tuple(single, items), None))
        }
        Command::CheckPi(args) => {
            let p = polynomial(&args.poly, None, Some(args.n), limits)?;
            let verdict = is_pi(&p, args.n, &options(&args.random, limits))?;
            let mut out = to_value(&verdict);
            out["polynomial"] = json!(p.to_string());
            Ok((out, seed_of(&args.random)))
        }
        Command::CheckCentral(args) => {
            let p = polynomial(&args.poly, None, Some(args.n), limits)?;
            let verdict = is_central(&p, args.n, &options(&args.random, limits))?;
            let mut out = to_value(&verdict);
            out["polynomial"] = json!(p.to_string());
            Ok((out, seed_of(&args.random)))
        }
        Command::MakeCentral(args) => {
            let (c, verdict) = construct_central(args.n, &options(&args.random, limits))?;
            Ok((json!({"polynomial": c.to_string(), "m": c.m(), "verdict": verdict}), seed_of(&args.random)))
        }
        Command::CentralForPoints(args) => {
            let (points, _) = read_tuples(&args.tuples)?;
            let n = points.first().map_or(1, MatrixTuple::n);
            let out = central_for_points(&points, n, &options(&args.random, limits))?;
            Ok((to_value(&out), Some(args.random.seed)))
        }
        Command::IdealOfPoints(args) => {
            let (points, _) = read_tuples(&args.tuples)?;
            let m = args.m.or(points.first().map(MatrixTuple::m));
            let n = args.n.or(points.first().map(MatrixTuple::n));
            let (Some(m), Some(n)) = (m, n) else {
                return Err(Failure::Input("an empty point list needs --m and --n".into()));
            };
            let ideal = ideal_of_points_with(m, n, &points, args.degree, limits)?;
            Ok((to_value(&ideal), None))
        }
        Command::Separate(args) => {
            let (points, _) = read_tuples(&args.tuples)?;
            let target = read_one(&args.target)?;
            let d_max = args.degree.unwrap_or(2 * target.n() * target.n());
            let out = separate(&points, &target, d_max)?;
            let mut value = to_value(&out);
            value["dMax"] = json!(d_max);
            Ok((value, None))
        }
        Command::ZeroLocus(args) => {
            let (tuples, single) = read_tuples(&args.tuple)?;
            let first = tuples.first().ok_or_else(|| Failure::Input("no tuples given".into()))?;
            let (m, n) = (first.m(), first.n());
            let gens = args
                .exprs
                .iter()
                .map(|s| nvar_core::parse_with(s, m, Some(n), limits))
                .collect::<Result<Vec<_>, _>>()?;
            let ideal = IdealPresentation::new(m, n, gens)?;
            let items = tuples
                .par_iter()
                .map(|a| zero_locus_member(&ideal, a).map(|member| json!({"member": member})))
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok((per_tuple(single, items), None))
        }
        Command::NssExperiment(args) => {
            let (points, _) = read_tuples(&args.tuples)?;
            let (targets, _) = read_tuples(&args.target)?;
            let report = nullstellensatz_experiment(&points, &targets, args.degree)?;
            Ok((to_value(&report), None))
        }
        Command::Builtins => {
            let examples = [
                Builtin::Standard(4),
                Builtin::CommutatorSquare,
                Builtin::FriedlandC,
                Builtin::Formanek(3),
            ];
            let items: Vec<Value> = BUILTIN_NAMES
                .iter()
                .zip(examples)
                .map(|(name, b)| {
                    json!({
                        "name": name,
                        "example": b.to_string(),
                        "generators": b.generators(),
                        "description": b.description(),
                    })
                })
                .collect();
            Ok((Value::Array(items), None))
        }
    }
}
