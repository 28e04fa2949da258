//! Command-line surface. Every outcome is one JSON document: the report on
//! success, an error object otherwise.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use qpair::classify::DEFAULT_TOL;
use qpair::degree::{degree, ls_optimize, LsOptions};
use qpair::random::{random_rotation, random_state, rng_from_seed};
use qpair::{construct_family, FamilySpec, Rank2Params, Sign, TwoQubitState};
use serde_json::Value;

use crate::json::{self, object};
use crate::report;
use crate::statefile::{parse_state, serialize_state, ParseError, StateFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qpair", version, about = "Two-qubit state analysis: invariants, separability, degree of separability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// State file (`-` for standard input)
    #[arg(value_name = "INPUT")]
    positional: Option<PathBuf>,
    #[arg(long = "input", value_name = "PATH", conflicts_with = "positional")]
    flag: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of standard output
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct Common {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    /// Decision tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct Optimizer {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    /// Resolution on λ
    #[arg(long, default_value_t = LsOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = LsOptions::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct Random {
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rank of a random density matrix (1 to 4)
    #[arg(long, conflicts_with = "family")]
    rank: Option<usize>,
    /// chaotic, bell, generic-pure, werner, werner-first, werner-second, rank-two
    #[arg(long)]
    family: Option<String>,
    /// Family parameters: generic-pure p; werner x; werner-first ±1 c1 c2 c3;
    /// werner-second x p; rank-two γ1 γ2 x1 x2 x3
    #[arg(long, num_args = 1.., allow_negative_numbers = true, requires = "family")]
    params: Vec<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validity verdict (exit 0 valid, 2 invalid)
    Check(Common),
    /// Local and global invariants, det E, Spur|C|, spectrum
    Invariants(Common),
    /// Entanglement, separability, rank, family
    Classify(Common),
    /// Canonical form, plus generic-form parameters for pure and rank-2 states
    Canonical(Common),
    /// Degree of separability
    Degree(Optimizer),
    /// LS decomposition from the optimizer
    Decompose(Optimizer),
    /// The fifteen parameters grouped by the five observables
    Expectations(Common),
    /// Emit a state file
    Random(Random),
    /// Full report
    Report(Optimizer),
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io { path: String, message: String },
    Parse(ParseError),
    Compute(qpair::Error),
}

impl From<qpair::Error> for Failure {
    fn from(e: qpair::Error) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn to_value(&self) -> Value {
        let (kind, message, location) = match self {
            Failure::Usage(m) => ("usage".to_string(), m.clone(), None),
            Failure::Io { path, message } => ("io".to_string(), message.clone(), Some(path.clone())),
            Failure::Parse(e) => (format!("parse/{}", e.kind()), e.to_string(), e.location()),
            Failure::Compute(e) => ("compute".to_string(), e.to_string(), None),
        };
        object([(
            "error",
            object([
                ("kind", kind.into()),
                ("message", message.into()),
                ("location", location.map_or(Value::Null, Value::String)),
            ]),
        )])
    }
}

/// Exit code and the text destined for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn read_input(input: &Input) -> Result<StateFile, Failure> {
    let path = input.flag.as_ref().or(input.positional.as_ref());
    let bytes = match path {
        Some(p) if p.as_os_str() != "-" => fs::read(p).map_err(|e| Failure::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?,
        _ => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| Failure::Io { path: "<stdin>".into(), message: e.to_string() })?;
            buf
        }
    };
    parse_state(&bytes).map_err(Failure::Parse)
}

fn echo(file: &StateFile) -> Value {
    let mut v = crate::statefile::to_value(file);
    v.as_object_mut().expect("object").insert("payload".into(), file.payload.name().into());
    v
}

fn envelope(command: &str, file: Option<&StateFile>, body: Value) -> Value {
    object([
        ("command", command.into()),
        ("version", report::VERSION.into()),
        ("input", file.map_or(Value::Null, echo)),
        ("result", body),
    ])
}

fn random_family(name: &str, params: &[f64], seed: u64) -> Result<TwoQubitState, Failure> {
    let need = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(Failure::Usage(format!("family {name} takes {n} parameter(s), got {}", params.len())))
        }
    };
    let o_en = random_rotation(&mut rng_from_seed(seed));
    let spec = match name {
        "chaotic" => need(0).map(|_| FamilySpec::Chaotic)?,
        "bell" => need(0).map(|_| FamilySpec::Bell { o_en })?,
        "generic-pure" => need(1).map(|_| FamilySpec::GenericPure { p: params[0] })?,
        "werner" => need(1).map(|_| FamilySpec::Werner { x: params[0], o_en })?,
        "werner-first" => {
            need(4)?;
            FamilySpec::WernerFirst { sign: Sign::of(params[0]), c: [params[1], params[2], params[3]], o_en }
        }
        "werner-second" => need(2).map(|_| FamilySpec::WernerSecond { x: params[0], p: params[1] })?,
        "rank-two" => {
            need(5)?;
            FamilySpec::RankTwo(Rank2Params::new(params[0], params[1], [params[2], params[3], params[4]])?)
        }
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    };
    Ok(construct_family(&spec)?)
}

fn run_random(r: &Random) -> Result<String, Failure> {
    let mut meta = std::collections::BTreeMap::new();
    meta.insert("seed".to_string(), r.seed.to_string());
    let state = match (&r.family, r.rank) {
        (Some(name), _) => {
            meta.insert("family".to_string(), name.clone());
            if !r.params.is_empty() {
                let p: Vec<String> = r.params.iter().map(|x| format!("{x:?}")).collect();
                meta.insert("params".to_string(), p.join(" "));
            }
            random_family(name, &r.params, r.seed)?
        }
        (None, rank) => {
            if let Some(k) = rank {
                meta.insert("rank".to_string(), k.to_string());
            }
            random_state(r.seed, rank)?
        }
    };
    let file = StateFile { metadata: meta, ..StateFile::new(state) };
    Ok(serialize_state(&file, r.output.pretty))
}

fn ls_options(o: &Optimizer) -> LsOptions {
    LsOptions { restarts: o.restarts, tol: o.tol, seed: o.seed }
}

/// Report text and exit code for a parsed command line.
fn dispatch(cmd: &Command) -> Result<(i32, String, &Output), Failure> {
    let render = |v: Value, out: &Output| json::to_string(&v, out.pretty);
    Ok(match cmd {
        Command::Random(r) => (EXIT_OK, run_random(r)?, &r.output),
        Command::Check(c) => {
            let f = read_input(&c.input)?;
            let (valid, v) = report::validity(&f.state, c.tol)?;
            let code = if valid { EXIT_OK } else { EXIT_INVALID };
            (code, render(envelope("check", Some(&f), v), &c.output), &c.output)
        }
        Command::Invariants(c) => {
            let f = read_input(&c.input)?;
            (EXIT_OK, render(envelope("invariants", Some(&f), report::invariants(&f.state)?), &c.output), &c.output)
        }
        Command::Classify(c) => {
            let f = read_input(&c.input)?;
            let v = report::classification(&f.state, c.tol)?;
            (EXIT_OK, render(envelope("classify", Some(&f), v), &c.output), &c.output)
        }
        Command::Canonical(c) => {
            let f = read_input(&c.input)?;
            let v = report::canonical(&f.state, c.tol)?;
            (EXIT_OK, render(envelope("canonical", Some(&f), v), &c.output), &c.output)
        }
        Command::Expectations(c) => {
            let f = read_input(&c.input)?;
            (EXIT_OK, render(envelope("expectations", Some(&f), report::expectations(&f.state)), &c.output), &c.output)
        }
        Command::Degree(o) => {
            let f = read_input(&o.input)?;
            let opts = ls_options(o);
            let r = degree(&f.state, &opts)?;
            let v = object([("degree", report::degree_result(&r, &f.state)), ("options", report::options(&opts))]);
            (EXIT_OK, render(envelope("degree", Some(&f), v), &o.output), &o.output)
        }
        Command::Decompose(o) => {
            let f = read_input(&o.input)?;
            let opts = ls_options(o);
            let d = ls_optimize(&f.state, &opts)?;
            let v = object([
                ("decomposition", report::decomposition(&d, &f.state)),
                ("lower_bound", Value::Bool(true)),
                ("options", report::options(&opts)),
            ]);
            (EXIT_OK, render(envelope("decompose", Some(&f), v), &o.output), &o.output)
        }
        Command::Report(o) => {
            let f = read_input(&o.input)?;
            let (valid, v) = report::full(&f.state, DEFAULT_TOL, &ls_options(o))?;
            let code = if valid { EXIT_OK } else { EXIT_INVALID };
            (code, render(envelope("report", Some(&f), v), &o.output), &o.output)
        }
    })
}

fn failure(f: Failure) -> Outcome {
    Outcome { code: EXIT_FAILURE, stdout: json::to_string(&f.to_value(), false) + "\n" }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome { code: EXIT_OK, stdout: e.to_string() }
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return failure(Failure::Usage(first.to_string()));
        }
    };
    match dispatch(&cli.command) {
        Ok((code, text, out)) => {
            let text = text + "\n";
            match &out.output {
                Some(path) => match fs::write(path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new() },
                    Err(e) => failure(Failure::Io { path: path.display().to_string(), message: e.to_string() }),
                },
                None => Outcome { code, stdout: text },
            }
        }
        Err(f) => failure(f),
    }
}
