//! `cwlab`: JSON reports on stdout, logs on stderr.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 hypothesis held but the
//! conclusion failed, 3 hypothesis not satisfied.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cwlab::census::{census, DEFAULT_MAX_Q};
use cwlab::cw::{verify, Instance, TheoremId};
use cwlab::fuzz::run_fuzz;
use cwlab::grid::{omega_bar_with, ExponentMode, GridSet, PointSet, PointSetJson};
use cwlab::vset::analyze;
use cwlab::{Elem, FiniteField};

const MAX_Q_VAR: &str = "CWLAB_MAX_Q";

#[derive(Parser, Debug)]
#[command(name = "cwlab", version, about = "Exact experiments with Chevalley–Warning-type theorems over small finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field tables.
    #[command(subcommand)]
    Field(FieldCommand),
    /// Subsets of a field.
    #[command(subcommand)]
    Vset(VsetCommand),
    /// ω̲ of a point set or grid in F_q^n.
    OmegaBar(OmegaBarArgs),
    /// Check one theorem on one instance.
    Verify(VerifyArgs),
    /// Verify seeded random instances of a theorem.
    Fuzz(FuzzArgs),
    /// Count Vandermonde sets and additive cosets of a field.
    Census(CensusArgs),
}

#[derive(Subcommand, Debug)]
enum FieldCommand {
    /// Addition, multiplication and inverse tables.
    Table { spec: String },
}

#[derive(Subcommand, Debug)]
enum VsetCommand {
    /// ω, Vandermonde class, coset and subspace structure.
    Classify {
        spec: String,
        /// Element indices: `1,2` or `[1,2]`.
        #[arg(long)]
        set: String,
    },
}

#[derive(Args, Debug)]
struct OmegaBarArgs {
    spec: String,
    /// JSON list of points, or `{"arity":n,"points":[…]}`.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    points: Option<String>,
    /// JSON list of axes.
    #[arg(long)]
    grid: Option<String>,
    /// Cap every exponent at q − 1.
    #[arg(long)]
    reduced: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Overrides the theorem named in the instance.
    #[arg(long)]
    theorem: Option<String>,
    /// A file path or inline JSON. Payloads printed by `verify` and `fuzz`
    /// are accepted and their embedded instance is used.
    #[arg(long)]
    instance: String,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fields to draw from, cycled by trial index.
    #[arg(required = true)]
    specs: Vec<String>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    spec: String,
    /// Append every Vandermonde set as a JSON line.
    #[arg(long)]
    list: bool,
    /// Print the per-size breakdown as CSV instead of the JSON report.
    #[arg(long)]
    csv: bool,
}

/// Everything that ends the command with a message on stderr.
struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| input_error(format!("bad {what}: {e}")))
}

fn parse_set(text: &str) -> Result<Vec<Elem>, Failure> {
    let text = text.trim();
    if text.starts_with('[') {
        return parse_json("--set", text);
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map(Elem)
                .map_err(|_| input_error(format!("bad element index {s:?} in --set")))
        })
        .collect()
}

fn max_q() -> Result<u32, Failure> {
    match std::env::var(MAX_Q_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| input_error(format!("{MAX_Q_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

fn field_table(spec: &str) -> Outcome {
    let f = FiniteField::parse(spec)?;
    let elems: Vec<Elem> = f.elements().collect();
    let table = |op: &dyn Fn(Elem, Elem) -> Elem| -> Vec<Vec<Elem>> {
        elems.iter().map(|&x| elems.iter().map(|&y| op(x, y)).collect()).collect()
    };
    emit(&json!({
        "field": f.spec(),
        "p": f.characteristic(),
        "degree": f.degree(),
        "order": f.order(),
        "modulus": f.modulus(),
        "coefficients": elems.iter().map(|&x| f.coefficients(x)).collect::<Vec<_>>(),
        "add": table(&|x, y| f.add(x, y)),
        "mul": table(&|x, y| f.mul(x, y)),
        "inv": elems.iter().map(|&x| f.inv(x).ok()).collect::<Vec<_>>(),
    }))?;
    Ok(0)
}

fn vset_classify(spec: &str, set: &str) -> Outcome {
    let f = FiniteField::parse(spec)?;
    let set = parse_set(set)?;
    let report = analyze(&f, &set)?;
    let mut canonical = set.clone();
    canonical.sort_unstable();
    canonical.dedup();
    let mut payload = serde_json::to_value(&report)?;
    payload["field"] = json!(f.spec());
    payload["set"] = json!(canonical);
    emit(&payload)?;
    Ok(0)
}

fn omega_bar_cmd(args: &OmegaBarArgs) -> Outcome {
    let f = FiniteField::parse(&args.spec)?;
    let set = match (&args.points, &args.grid) {
        (Some(text), _) => {
            let value: Value = parse_json("--points", text)?;
            let raw: PointSetJson = if value.is_array() {
                let points: Vec<Vec<Elem>> = serde_json::from_value(value)?;
                let arity = points.first().map_or(0, Vec::len);
                PointSetJson { arity, points }
            } else {
                serde_json::from_value(value)?
            };
            PointSet::from_json(&f, &raw)?
        }
        (None, Some(text)) => GridSet::new(&f, parse_json("--grid", text)?)?.to_point_set(),
        (None, None) => return Err(input_error("give --points or --grid")),
    };
    let mode = if args.reduced { ExponentMode::Reduced } else { ExponentMode::Formal };
    let report = omega_bar_with(&set, mode)?;
    let mut payload = serde_json::to_value(&report)?;
    payload["field"] = json!(f.spec());
    payload["arity"] = json!(set.arity());
    payload["size"] = json!(set.len());
    emit(&payload)?;
    Ok(0)
}

/// Digs the instance out of a `verify` record or a `fuzz` report.
fn extract_instance(mut value: Value) -> Value {
    loop {
        value = if let Some(v) = value.get("counterexample").filter(|v| !v.is_null()) {
            v.clone()
        } else if let Some(v) = value.get("counterexamples").and_then(|v| v.get(0)) {
            v.clone()
        } else if let Some(v) = value.get("instance").filter(|v| v.is_object()) {
            v.clone()
        } else {
            return value;
        };
    }
}

fn verify_cmd(args: &VerifyArgs) -> Outcome {
    let text = if Path::new(&args.instance).is_file() {
        std::fs::read_to_string(&args.instance)?
    } else {
        args.instance.clone()
    };
    let mut value = extract_instance(parse_json("--instance", &text)?);
    if let Some(t) = &args.theorem {
        let t: TheoremId = t.parse()?;
        match value.as_object_mut() {
            Some(obj) => {
                obj.insert("theorem".into(), json!(t));
            }
            None => return Err(input_error("--instance must be a JSON object")),
        }
    }
    let instance = Instance::from_json(&serde_json::from_value(value)?)?;
    let record = verify(&instance)?;
    emit(&record)?;
    Ok(match (record.hypothesis_holds, record.failed()) {
        (false, _) => 3,
        (true, true) => 2,
        (true, false) => 0,
    })
}

fn fuzz_cmd(args: &FuzzArgs) -> Outcome {
    let theorem: TheoremId = args.theorem.parse()?;
    let fields = args.specs.iter().map(|s| FiniteField::parse(s)).collect::<Result<Vec<_>, _>>()?;
    eprintln!("cwlab: fuzzing {theorem} with {} trials, seed {}", args.trials, args.seed);
    let report = run_fuzz(theorem, &fields, args.trials, args.seed)?;
    eprintln!(
        "cwlab: hypothesis held {} times, {} conclusion failures",
        report.hypothesis_held, report.conclusion_failures
    );
    emit(&report)?;
    Ok(if report.clean() { 0 } else { 2 })
}

fn census_cmd(args: &CensusArgs) -> Outcome {
    let f = FiniteField::parse(&args.spec)?;
    let (report, listing) = census(&f, max_q()?, args.list)?;
    if args.csv {
        let mut w = csv::Writer::from_writer(std::io::stdout().lock());
        w.write_record(["size", "vandermonde", "cosets"])?;
        for (size, counts) in &report.per_size {
            w.write_record([size.to_string(), counts.vandermonde.to_string(), counts.cosets.to_string()])?;
        }
        w.flush()?;
    } else {
        emit(&report)?;
    }
    let mut out = std::io::stdout().lock();
    for set in &listing {
        writeln!(out, "{}", serde_json::to_string(set)?)?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Field(FieldCommand::Table { spec }) => field_table(&spec),
        Command::Vset(VsetCommand::Classify { spec, set }) => vset_classify(&spec, &set),
        Command::OmegaBar(args) => omega_bar_cmd(&args),
        Command::Verify(args) => verify_cmd(&args),
        Command::Fuzz(args) => fuzz_cmd(&args),
        Command::Census(args) => census_cmd(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("cwlab: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
