//! Exact computations with matrix tuples, trace polynomials, polynomial
//! identities and central polynomials of `M_n`, and point-level ideals.

pub mod builtins;
pub mod central;
pub mod error;
pub mod eval;
pub mod invariants;
pub mod limits;
pub mod linalg;
pub mod matrix;
pub mod multilinear;
pub mod nullstellensatz;
pub mod parse;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod tuple_file;
pub mod word;

pub use builtins::{Builtin, BUILTIN_NAMES};
pub use central::{
    central_for_points, construct_central, is_central, is_pi, CentralForPoints, CentralityVerdict, PiOptions,
    PiVerdict, RequestedMode, VerdictMode,
};
pub use error::{CoreError, Result};
pub use eval::{
    conjugate_test, evaluate, generates, ideal_dichotomy, ConjugacyCertificate, EvaluationReport, Evaluator,
    IdealImage,
};
pub use invariants::{fingerprint, friedland, separated_by_fingerprint, Fingerprint, Necklace, Separation};
pub use limits::Limits;
pub use matrix::{MatOp, Matrix, MatrixTuple};
pub use nullstellensatz::{
    ideal_of_points, nullstellensatz_experiment, separate, zero_locus_member, ExperimentReport,
    IdealPresentation, NotSeparable, PointIdealBasis, SeparationOutcome,
};
pub use parse::{parse, parse_with};
pub use poly::TracePolynomial;
pub use scalar::Scalar;
pub use tuple_file::TupleFile;
pub use word::Word;
