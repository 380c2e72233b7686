use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use nvar_core::{CoreError, Limits};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "nvar", version, about = "Exact computations with matrix tuples and trace polynomials")]
struct Cli {
    /// Write the run record here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for batch inputs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Evaluate an expression at each tuple.
    Eval(EvalArgs),
    /// Test whether each tuple generates M_n.
    Generates(TupleArgs),
    /// Decide simultaneous conjugacy of --tuple and --target.
    Conjugate(ConjugateArgs),
    /// Trace-word invariants of each tuple.
    Fingerprint(FingerprintArgs),
    /// Decide whether an expression is a polynomial identity of M_n.
    CheckPi(PolyCheckArgs),
    /// Decide whether an expression is a central polynomial of M_n.
    CheckCentral(PolyCheckArgs),
    /// Construct and verify a central polynomial of M_n.
    MakeCentral(MakeCentralArgs),
    /// Central polynomial that is a nonzero scalar at every given point.
    CentralForPoints(CentralForPointsArgs),
    /// Degree-truncated ideal of polynomials vanishing on the given points.
    IdealOfPoints(IdealArgs),
    /// Polynomial vanishing on --tuples but not at --target.
    Separate(SeparateArgs),
    /// Whether each tuple lies in the zero locus of the --expr generators.
    ZeroLocus(ZeroLocusArgs),
    /// Point ideal, membership of each target, and agreement with conjugacy.
    NssExperiment(ExperimentArgs),
    /// List the named polynomials accepted by --builtin.
    Builtins,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Generates(_) => "generates",
            Command::Conjugate(_) => "conjugate",
            Command::Fingerprint(_) => "fingerprint",
            Command::CheckPi(_) => "check-pi",
            Command::CheckCentral(_) => "check-central",
            Command::MakeCentral(_) => "make-central",
            Command::CentralForPoints(_) => "central-for-points",
            Command::IdealOfPoints(_) => "ideal-of-points",
            Command::Separate(_) => "separate",
            Command::ZeroLocus(_) => "zero-locus",
            Command::NssExperiment(_) => "nss-experiment",
            Command::Builtins => "builtins",
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct PolyArgs {
    /// Expression in the polynomial grammar, e.g. "tr(X1*X2) - [X1, X2]^2".
    #[arg(long, conflicts_with = "builtin")]
    expr: Option<String>,
    /// Named polynomial, e.g. std(4), comm_sq, friedland_c, formanek(3).
    #[arg(long)]
    builtin: Option<String>,
    /// Number of generators (default: inferred).
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    poly: PolyArgs,
    /// JSON file with one tuple or an array of tuples.
    #[arg(long)]
    tuple: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct TupleArgs {
    #[arg(long)]
    tuple: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ConjugateArgs {
    #[arg(long)]
    tuple: PathBuf,
    #[arg(long)]
    target: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct FingerprintArgs {
    #[arg(long)]
    tuple: PathBuf,
    /// Longest necklace (default: n^2).
    #[arg(long)]
    maxlen: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exact,
    Random,
}

#[derive(Args, Debug, Serialize)]
struct RandomArgs {
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = 64)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail with a resource error instead of falling back to random trials
    /// when an exact check is too large.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug, Serialize)]
struct PolyCheckArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    random: RandomArgs,
}

#[derive(Args, Debug, Serialize)]
struct MakeCentralArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    random: RandomArgs,
}

#[derive(Args, Debug, Serialize)]
struct CentralForPointsArgs {
    /// JSON file with the points.
    #[arg(long)]
    tuples: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    random: RandomArgs,
}

#[derive(Args, Debug, Serialize)]
struct IdealArgs {
    #[arg(long)]
    tuples: PathBuf,
    /// Longest word used.
    #[arg(long)]
    degree: usize,
    /// Shape for an empty point list.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct SeparateArgs {
    #[arg(long)]
    tuples: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Largest degree bound tried (default: 2 n^2).
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct ZeroLocusArgs {
    /// Ideal generator; repeat for several.
    #[arg(long = "expr")]
    exprs: Vec<String>,
    #[arg(long)]
    tuple: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ExperimentArgs {
    #[arg(long)]
    tuples: PathBuf,
    /// JSON file with the targets.
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    degree: usize,
}

/// Failure that maps to a process exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    Core(CoreError),
    Input(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e {
                CoreError::Precondition(_) | CoreError::NotTraceFree => 3,
                CoreError::Resource { .. } => 4,
                CoreError::Inconsistency(_) | CoreError::VerificationFailed(_) => 1,
                _ => 2,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "malformed-input",
            3 => "precondition",
            4 => "resource-limit",
            _ => "internal",
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Input(msg) => f.write_str(msg),
        }
    }
}

#[derive(Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    ceilings: Limits,
    result: serde_json::Value,
    timings: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let limits = Limits::from_env();
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &limits);
    let elapsed = start.elapsed();
    let (result, seed) = match outcome {
        Ok(v) => v,
        Err(f) => {
            let err = json!({"error": {"kind": f.kind(), "message": f.to_string()}});
            eprintln!("{err}");
            return ExitCode::from(f.exit_code());
        }
    };
    let record = RunRecord {
        command: cli.command.name(),
        parameters: serde_json::to_value(&cli.command).expect("arguments serialize"),
        seed,
        ceilings: limits,
        result,
        timings: json!({"totalMs": elapsed.as_secs_f64() * 1000.0}),
    };
    let text = serde_json::to_string_pretty(&record).expect("records serialize");
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}
