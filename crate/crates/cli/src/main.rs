//! `approxsys`: evaluate expressions, enumerate and convert systems, and run
//! bounded verification oracles.
//!
//! Exit codes: 0 success, 1 violations found, 2 usage or file errors,
//! 3 step-cap exhaustion.

mod expr;
mod verify;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use approxsys::engines::{metric_to_topological, topological_to_metric};
use approxsys::names::NameError;
use approxsys::spaces::IndexValue;
use approxsys::systems::builders::builder;
use approxsys::systems::jsonl::{load_system, write_system, LoadedSystem};
use approxsys::systems::ApproxSystem;
use approxsys::PrecisionSchedule;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "approxsys", version, about = "Exact evaluation and checking of enumerable approximation systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchedArg {
    Dyadic,
    Harmonic,
}

impl SchedArg {
    fn schedule(self) -> PrecisionSchedule {
        match self {
            SchedArg::Dyadic => PrecisionSchedule::dyadic(),
            SchedArg::Harmonic => PrecisionSchedule::harmonic(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    M2t,
    T2m,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression and print v(n) with its radius r_n.
    Eval {
        /// e.g. "sq(x)", "add(x, y)", "affine(2, -1/3, x)", "const:5"
        expr: String,
        /// Binds the next variable: rat:<p/q>[,<p/q>...] or sqrt:<p/q>
        #[arg(long = "input")]
        inputs: Vec<String>,
        #[arg(long, default_value_t = 8)]
        n: u64,
        #[arg(long, value_enum, default_value = "dyadic")]
        schedule: SchedArg,
        /// Bound on the search steps of each evaluation.
        #[arg(long, default_value_t = 1_000_000)]
        step_cap: u64,
    },
    /// Write the quadruples emitted at stages < N as JSONL.
    Enumerate {
        /// Builder (id, sq, add, mul, empty, const:<q>, affine:<a>,<b>) or a JSONL file.
        system: String,
        #[arg(long, default_value_t = 100)]
        stages: u64,
        #[arg(long, value_enum, default_value = "dyadic")]
        schedule: SchedArg,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
    },
    /// Convert between metric and topological systems.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        /// Builder or JSONL file.
        system: String,
        #[arg(long, default_value_t = 100)]
        stages: u64,
        #[arg(long, value_enum, default_value = "dyadic")]
        schedule: SchedArg,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
    },
    /// Check a system against its defining condition up to explicit bounds.
    Verify {
        /// Finite instance (JSON); checks a pair system against it.
        #[arg(long)]
        instance: Option<String>,
        /// With --instance: a pair JSONL file (default: the maximal system).
        /// Otherwise: halving, remark, a builder, or a quadruple JSONL file.
        #[arg(long)]
        system: Option<String>,
        /// Builder whose function a JSONL system is checked against.
        #[arg(long)]
        against: Option<String>,
        #[arg(long, value_enum, default_value = "dyadic")]
        schedule: SchedArg,
        /// Stage cap when reading a pair system.
        #[arg(long, default_value_t = 64)]
        stages: u64,
        /// Number of random rational samples for builder systems.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Cap(String),
    Violations,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violations => 1,
            Failure::Usage(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn eval(expr: &str, inputs: &[String], n: u64, sch: PrecisionSchedule, step_cap: u64) -> Result<(), Failure> {
    let e = expr::parse(expr).map_err(|e| Failure::Usage(format!("parse error {e}")))?;
    let vars = e.vars();
    if vars.len() != inputs.len() {
        return Err(Failure::Usage(format!(
            "expression has {} variable(s) but {} --input given",
            vars.len(),
            inputs.len()
        )));
    }
    let mut bound = Vec::new();
    for (v, spec) in vars.into_iter().zip(inputs) {
        bound.push((v, expr::parse_input(spec, &sch).map_err(|e| Failure::Usage(e.0))?));
    }
    let name = expr::build(&e, &bound, &sch, step_cap).map_err(|e| Failure::Usage(e.0))?;
    match name.at(n) {
        Ok(v) => {
            let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
            println!("{} ±{}", parts.join(","), sch.r(n));
            Ok(())
        }
        Err(e @ NameError::StepCap { .. }) => Err(Failure::Cap(e.to_string())),
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

/// A builder spec or a loaded JSONL file.
fn load(spec: &str, sch: PrecisionSchedule) -> Result<LoadedSystem, Failure> {
    if Path::new(spec).is_file() {
        let text = read_file(spec)?;
        return load_system(&text).map_err(|e| Failure::Usage(format!("{spec}: {e}")));
    }
    builder(spec, sch).map(|(s, _)| LoadedSystem::Vector(s)).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    stages: u64,
    dir: Option<Direction>,
) -> Result<(), Failure> {
    let sys = match dir {
        None => sys.clone(),
        Some(Direction::M2t) => metric_to_topological(sys),
        Some(Direction::T2m) => topological_to_metric(sys),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    write_system(&sys, stages, &mut out)?;
    out.flush()?;
    Ok(())
}

fn enumerate(spec: &str, stages: u64, sch: PrecisionSchedule, dir: Option<Direction>) -> Result<(), Failure> {
    match load(spec, sch)? {
        LoadedSystem::Vector(s) => emit(&s, stages, dir),
        LoadedSystem::Grid(s) => emit(&s, stages, dir),
        LoadedSystem::Nat(s) => emit(&s, stages, dir),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Eval { expr, inputs, n, schedule, step_cap } => eval(&expr, &inputs, n, schedule.schedule(), step_cap),
        Cmd::Enumerate { system, stages, schedule, format: Format::Jsonl } => {
            enumerate(&system, stages, schedule.schedule(), None)
        }
        Cmd::Convert { direction, system, stages, schedule, format: Format::Jsonl } => {
            enumerate(&system, stages, schedule.schedule(), Some(direction))
        }
        Cmd::Verify { instance, system, against, schedule, stages, samples, seed } => {
            let sch = schedule.schedule();
            let ok = match (instance, system) {
                (Some(inst), sys) => {
                    verify::instance(&read_file(&inst)?, sys.as_deref().map(read_file).transpose()?, stages)?
                }
                (None, Some(spec)) => verify::system(&spec, against.as_deref(), sch, samples, seed)?,
                (None, None) => return Err(Failure::Usage("verify needs --instance or --system".into())),
            };
            if ok {
                Ok(())
            } else {
                Err(Failure::Violations)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Cap(m) => eprintln!("error: {m}"),
                Failure::Violations => {}
            }
            ExitCode::from(f.code())
        }
    }
}
