//! `holonomy`: classify pairs, normalize characters, build pentagons and draw them.
//!
//! Exit codes: 0 success, 2 mathematical rejection, 3 invalid input, 4 internal failure.

mod input;
mod selftest;

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holonomy_core::charvar::{in_v, is_abelian, is_reducible};
use holonomy_core::{
    character_of, classify_commutator, classify_pair, construct, markoff_normalize,
    render_developing, render_pentagon, ConstructOptions, ConstructionResult, Error, ErrorKind,
    Model, Outcome, PlanePoint, Scene,
};
use log::{debug, info};
use serde_json::{json, Value};

use input::Subject;

#[derive(Debug)]
pub enum Failure {
    /// Valid input that is mathematically rejected; carries the JSON report.
    Rejected(Value),
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.kind() {
            ErrorKind::InvalidInput => Failure::Invalid(e.to_string()),
            ErrorKind::Rejection => Failure::Rejected(json!({ "reason": e.to_string() })),
            ErrorKind::Internal => Failure::Internal(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "holonomy",
    version,
    about = "Pentagons and cone structures for PSL(2,R) pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// JSON input document; standard input when omitted.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Accept a character triple and realize it by matrices.
    #[arg(long)]
    realize: bool,
}

#[derive(Args)]
struct Tuning {
    /// Signed offset of the basepoint from the commutator axis when Tr[g,h] < -2.
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<f64>,
    /// Seed for fallback probe orders.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Halfplane,
    Disc,
}

#[derive(Subcommand)]
enum Command {
    /// Report kappa, the case and the commutator region of a pair.
    Classify {
        #[command(flatten)]
        io: Io,
    },
    /// Normalize a character with kappa > 2 by basis changes.
    Normalize {
        #[command(flatten)]
        io: Io,
    },
    /// Build and verify the pentagon for a pair.
    Construct {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        tuning: Tuning,
        /// Also draw the pentagon with its axes into this SVG file.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Draw part of the developing map as SVG.
    Render {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        tuning: Tuning,
        /// Maximum reduced word length of the tiles (at most 8).
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Run built-in fixtures and a seeded random batch.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random pairs in the batch.
        #[arg(long, default_value_t = 400)]
        count: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HOLONOMY_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(cli.command)))
        .unwrap_or_else(|_| Err(Failure::Internal("panic".into())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(report)) => {
            print!("{}", pretty(&report));
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid input: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal failure: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { io } => {
            let (g, h) = input::read(io.input.as_deref())?.pair(io.realize)?;
            emit(io.out.as_deref(), &pretty(&classify(&g, &h)))
        }
        Command::Normalize { io } => {
            let inp = input::read(io.input.as_deref())?;
            let t = match inp.subject {
                Subject::Triple(t) => t,
                Subject::Pair(g, h) => character_of(&g, &h),
            };
            emit(io.out.as_deref(), &pretty(&normalize(&t)?))
        }
        Command::Construct { io, tuning, svg } => {
            let inp = input::read(io.input.as_deref())?;
            let (g, h) = inp.pair(io.realize)?;
            let opts = options(&inp.options, &tuning);
            let res = build(&g, &h, &opts)?;
            if let Some(path) = svg {
                let scene = Scene::new(inp.options.model.unwrap_or(Model::HalfPlane), 0)?;
                write_file(&path, &render_pentagon(&res, &scene)?)?;
            }
            emit(io.out.as_deref(), &pretty(&construction_report(&res)?))
        }
        Command::Render {
            io,
            tuning,
            depth,
            model,
        } => {
            let inp = input::read(io.input.as_deref())?;
            let (g, h) = inp.pair(io.realize)?;
            let res = build(&g, &h, &options(&inp.options, &tuning))?;
            let model = match model {
                Some(ModelArg::Halfplane) => Model::HalfPlane,
                Some(ModelArg::Disc) => Model::Disc,
                None => inp.options.model.unwrap_or(Model::HalfPlane),
            };
            let scene = Scene::new(model, depth.or(inp.options.depth).unwrap_or(2))?;
            let rendered = render_developing(&res, &scene)?;
            eprintln!("tiles: {}", rendered.tiles);
            emit(io.out.as_deref(), &rendered.svg)
        }
        Command::Selftest { seed, count, out } => {
            let report = selftest::run(seed, count);
            let passed = report["passed"] == Value::Bool(true);
            emit(out.as_deref(), &pretty(&report))?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Internal("selftest failed".into()))
            }
        }
    }
}

fn options(file: &input::Options, flags: &Tuning) -> ConstructOptions {
    let mut opts = ConstructOptions::default();
    if let Some(o) = flags.offset.or(file.offset) {
        opts.offset = o;
    }
    if let Some(s) = flags.seed.or(file.seed) {
        opts.seed = s;
    }
    opts
}

pub fn classify(g: &holonomy_core::Isometry, h: &holonomy_core::Isometry) -> Value {
    let t = character_of(g, h);
    json!({
        "kappa": t.kappa(),
        "case": classify_pair(g, h).name(),
        "commutator_region": format!("{:?}", classify_commutator(g, h)),
        "in_V": in_v(&t),
        "reducible": is_reducible(&t),
        "abelian": is_abelian(g, h),
    })
}

fn normalize(t: &holonomy_core::CharacterTriple) -> Result<Value, Failure> {
    match markoff_normalize(t) {
        Ok(n) => Ok(json!({
            "output_triple": n.output.to_array(),
            "kappa": n.output.kappa(),
            "word": n.word.names(),
            "iterations": n.iterations,
        })),
        Err(Error::InV) => Err(Failure::Rejected(json!({ "reason": "in V" }))),
        Err(Error::KappaTooSmall(k)) => Err(Failure::Rejected(json!({
            "reason": "kappa ≤ 2",
            "kappa": if k.is_finite() { json!(k) } else { Value::Null },
        }))),
        Err(e) => Err(e.into()),
    }
}

fn build(
    g: &holonomy_core::Isometry,
    h: &holonomy_core::Isometry,
    opts: &ConstructOptions,
) -> Result<ConstructionResult, Failure> {
    info!(
        "constructing with offset {} seed {}",
        opts.offset, opts.seed
    );
    match construct(g, h, opts)? {
        Outcome::Holonomy(res) => {
            debug!("case {} at basepoint {:?}", res.case_tag, res.basepoint);
            Ok(*res)
        }
        Outcome::NotHolonomy(reason) => Err(Failure::Rejected(json!({
            "reason": format!("{reason:?}"),
        }))),
    }
}

fn point(p: &PlanePoint) -> [f64; 2] {
    [p.x(), p.h()]
}

fn construction_report(res: &ConstructionResult) -> Result<Value, Failure> {
    res.verify()?;
    Ok(json!({
        "case": res.case_tag.to_string(),
        "theta": res.corner_angle,
        "corner_order": res.corner_order,
        "orientation": format!("{:?}", res.orientation),
        "basepoint": point(&res.basepoint),
        "vertices": res.pentagon.vertices().iter().map(point).collect::<Vec<_>>(),
        "word": res.word.names(),
        "g_eff": res.g_eff.entries(),
        "h_eff": res.h_eff.entries(),
        "commutator_region": format!("{:?}", res.commutator_region),
        "twist": res.twist,
        "angle_sum": res.angle_sum,
        "signed_area": res.signed_area,
        "verified": true,
    }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Internal(format!("cannot write standard output: {e}")))
        }
    }
}
