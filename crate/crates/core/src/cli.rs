//! The `wrcollapse` command line: `build`, `collapse`, `verify`, `simulate`,
//! `count` and `export`.
//!
//! JSON goes to standard output, diagnostics to standard error. Exit status
//! is 0 on success, 1 when a verification fails, 2 on usage or input errors
//! and 3 when a size bound is exceeded.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::collapse::{self, CollapseError};
use crate::complexes::export::{to_dot, to_off, vertex_position};
use crate::complexes::{verify_trace, CollapseTrace, Complex, Node, Simplex, Vertex};
use crate::executions;
use crate::limits;
use crate::protocol::{self, NodeInfo, Tower};
use crate::simulator::{self, RunDescriptor, Scheduler};
use crate::procset::ProcessId;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wrcollapse", version, about = "Write/read protocol complexes and their collapses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a complex as JSON.
    Build(BuildArgs),
    /// Emit a collapse trace as JSON.
    Collapse(CollapseArgs),
    /// Replay a trace and check every step.
    Verify {
        /// Trace file; standard input when omitted or `-`.
        input: Option<PathBuf>,
    },
    /// Run the layered immediate-snapshot algorithm.
    Simulate(SimulateArgs),
    /// Profile counts and simplex censuses of WR_l for l = 0..=n.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Write a complex in a renderer format.
    Export {
        /// Complex JSON from `build`; standard input when omitted or `-`.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    n: usize,
    /// Level of WR_l.
    #[arg(long, default_value_t = 0, conflicts_with_all = ["chromatic", "iterated", "lambda", "snapshot"])]
    l: usize,
    /// The chromatic subdivision of Δⁿ.
    #[arg(long)]
    chromatic: bool,
    /// WR^(k)(Δⁿ) with its carrier map.
    #[arg(long, value_name = "K", conflicts_with_all = ["chromatic", "lambda", "snapshot"])]
    iterated: Option<usize>,
    /// The subdivided horn at corner P.
    #[arg(long, value_name = "P", conflicts_with_all = ["chromatic", "snapshot"])]
    lambda: Option<ProcessId>,
    /// The snapshot subcomplex of WR(Δⁿ).
    #[arg(long, conflicts_with = "chromatic")]
    snapshot: bool,
    /// Add a simplex census and the Euler characteristic.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct CollapseArgs {
    #[arg(long)]
    n: usize,
    /// One round WR_l ↘ WR_{l+1}.
    #[arg(long, value_name = "L")]
    l: Option<usize>,
    /// All rounds WR(Δⁿ) ↘ χ(Δⁿ).
    #[arg(long, conflicts_with = "l")]
    full: bool,
    /// Collapse whole orbits under the symmetric group (with --l or --full).
    #[arg(long)]
    equivariant: bool,
    /// χ(Δⁿ) to the void complex.
    #[arg(long, conflicts_with_all = ["l", "full", "lambda", "iterated", "equivariant"])]
    void: bool,
    /// χ(Δⁿ) to the subdivided horn at corner P.
    #[arg(long, value_name = "P", conflicts_with_all = ["l", "full", "iterated", "equivariant"])]
    lambda: Option<ProcessId>,
    /// WR^(k)(Δⁿ) to χ^(k)(Δⁿ).
    #[arg(long, value_name = "K", conflicts_with_all = ["l", "full", "equivariant"])]
    iterated: Option<usize>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Run descriptor file (`{"n":…, "scheduler":{…}}`); standard input when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "input")]
    n: Option<usize>,
    /// Seeded random scheduling.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated process ids, one per register operation.
    #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
    script: Option<Vec<ProcessId>>,
    /// Run processes one after another in this order (comma-separated).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["seed", "script"])]
    sequential: Option<Vec<ProcessId>>,
    /// All profiles over every interleaving.
    #[arg(long, conflicts_with_all = ["seed", "script", "sequential", "fuzz"])]
    exhaustive: bool,
    /// Check this many seeded runs against χ(Δⁿ).
    #[arg(long, value_name = "RUNS", conflicts_with_all = ["script", "sequential"])]
    fuzz: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Dot,
    Off,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    /// JSON still printed to standard output.
    report: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
            report: None,
        }
    }
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e: Error = e.into();
        let code = if e.is_size_bound() {
            EXIT_SIZE
        } else if matches!(e, Error::Collapse(CollapseError::Invariant(_))) {
            EXIT_VERIFY
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
            report: None,
        }
    }
}

type Outcome = Result<String, Failure>;

/// Runs the command line with the process arguments and streams.
pub fn run_from_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line on `args` (program name first).
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    limits::init_from_env();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(f) => {
            if let Some(report) = f.report {
                let _ = writeln!(out, "{report}");
            }
            let _ = writeln!(err, "wrcollapse: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Build(a) => build(a),
        Command::Collapse(a) => collapse(a),
        Command::Verify { input } => verify(&read_input(input.as_ref())?),
        Command::Simulate(a) => simulate(a),
        Command::Count { n } => count(n),
        Command::Export { input, format } => export(&read_input(input.as_ref())?, format),
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::usage(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn to_json<T: serde::Serialize>(v: &T) -> Outcome {
    serde_json::to_string(v).map_err(|e| Failure::usage(e.to_string()))
}

fn with_stats<V: crate::complexes::Label>(mut value: Value, c: &Complex<V>) -> Value {
    let census = c.census();
    value["stats"] = json!({
        "faces": census.faces,
        "maximal": census.maximal,
        "total": census.total,
        "euler": census.euler,
    });
    value
}

fn build(a: BuildArgs) -> Outcome {
    limits::check_n(a.n)?;
    if let Some(k) = a.iterated {
        let it = protocol::build_iterated(a.n, k)?;
        let mut v = serde_json::to_value(&it).map_err(|e| Failure::usage(e.to_string()))?;
        if a.stats {
            v = with_stats(v, &it.complex);
        }
        return to_json(&v);
    }
    let c = if a.chromatic {
        protocol::chromatic_standard(a.n)?
    } else if let Some(p) = a.lambda {
        if p as usize > a.n {
            return Err(Failure::usage(format!("corner {p} is not in [{}]", a.n)));
        }
        protocol::chromatic_lambda(a.n, p)?
    } else if a.snapshot {
        protocol::snapshot_subcomplex(&protocol::build_wr(a.n, 0)?)
    } else {
        if a.l > a.n {
            return Err(Failure::usage(format!("--l {} exceeds --n {}", a.l, a.n)));
        }
        protocol::build_wr(a.n, a.l)?.complex
    };
    let mut v = serde_json::to_value(&c).map_err(|e| Failure::usage(e.to_string()))?;
    if a.stats {
        v = with_stats(v, &c);
    }
    to_json(&v)
}

fn collapse(a: CollapseArgs) -> Outcome {
    limits::check_n(a.n)?;
    if a.void {
        return to_json(&collapse::chromatic_collapse_void(a.n)?);
    }
    if let Some(p) = a.lambda {
        if p as usize > a.n {
            return Err(Failure::usage(format!("corner {p} is not in [{}]", a.n)));
        }
        return to_json(&collapse::chromatic_collapse_lambda(a.n, p)?);
    }
    if let Some(k) = a.iterated {
        if k == 0 {
            return Err(Failure::usage("--iterated needs k >= 1"));
        }
        return to_json(&collapse::iterated_collapse(a.n, k)?);
    }
    if a.full {
        return to_json(&collapse::collapse_to_chromatic(a.n, a.equivariant)?);
    }
    let Some(l) = a.l else {
        return Err(Failure::usage(
            "choose one of --l, --full, --void, --lambda, --iterated",
        ));
    };
    if l >= a.n.max(1) {
        return Err(Failure::usage(format!("--l {l} must be below --n {}", a.n.max(1))));
    }
    let t = if a.equivariant {
        collapse::equivariant_collapse_round(a.n, l)?
    } else {
        collapse::collapse_round(a.n, l)?
    };
    to_json(&t)
}

fn verify_report<V: crate::complexes::Label>(t: &CollapseTrace<V>) -> Outcome {
    match verify_trace(t) {
        Ok(()) => to_json(&json!({
            "ok": true,
            "steps": t.steps.len(),
            "collapses": t.collapse_count(),
            "phases": t.phases(),
            "target_maximal": t.target.maximal_count(),
        })),
        Err(e) => Err(Failure {
            code: EXIT_VERIFY,
            message: e.to_string(),
            report: Some(json!({ "ok": false, "error": e.to_string(), "detail": format!("{e:?}") })),
        }),
    }
}

fn verify(text: &str) -> Outcome {
    let protocol_err = match serde_json::from_str::<CollapseTrace<Vertex>>(text) {
        Ok(t) => return verify_report(&t),
        Err(e) => e,
    };
    match serde_json::from_str::<CollapseTrace<Node>>(text) {
        Ok(t) => verify_report(&t),
        Err(_) => Err(Failure::usage(format!("not a collapse trace: {protocol_err}"))),
    }
}

fn simulate(a: SimulateArgs) -> Outcome {
    let (n, scheduler) = match (&a.input, a.n) {
        (_, None) => {
            let d: RunDescriptor = serde_json::from_str(&read_input(a.input.as_ref())?)
                .map_err(|e| Failure::usage(format!("bad run descriptor: {e}")))?;
            (d.n, d.scheduler)
        }
        (_, Some(n)) => {
            let s = if a.exhaustive {
                Scheduler::Exhaustive
            } else if let Some(script) = a.script.clone() {
                Scheduler::Scripted { script }
            } else if let Some(order) = &a.sequential {
                limits::check_n(n)?;
                let mut seen = crate::procset::ProcSet::EMPTY;
                for &p in order {
                    if p as usize > n || seen.contains(p) {
                        return Err(Failure::usage(format!("bad --sequential order at {p}")));
                    }
                    seen.insert(p);
                }
                if seen != crate::procset::ProcSet::full(n) {
                    return Err(Failure::usage("--sequential must list every process"));
                }
                Scheduler::sequential(n, order)
            } else {
                Scheduler::SeededRandom {
                    seed: a.seed.unwrap_or(0),
                }
            };
            (n, s)
        }
    };
    if let Some(runs) = a.fuzz {
        let seed = match scheduler {
            Scheduler::SeededRandom { seed } => seed,
            _ => a.seed.unwrap_or(0),
        };
        let report = simulator::fuzz(n, runs, seed)?;
        let text = to_json(&report)?;
        if report.violations.is_empty() {
            return Ok(text);
        }
        return Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{} profiles outside the subdivision", report.violations.len()),
            report: serde_json::from_str(&text).ok(),
        });
    }
    if scheduler == Scheduler::Exhaustive {
        let profiles = simulator::run_exhaustive(n)?;
        return to_json(&json!({ "n": n, "count": profiles.len(), "profiles": profiles }));
    }
    to_json(&simulator::run(n, &scheduler)?)
}

fn count(n: usize) -> Outcome {
    limits::check_n(n)?;
    let mut levels = Vec::new();
    for l in 0..=n {
        let family = executions::enumerate_view_family(n, l)?;
        let c = protocol::build_wr(n, l)?.complex;
        let census = c.census();
        levels.push(json!({
            "l": l,
            "profiles": family.len(),
            "maximal": c.maximal_count(),
            "faces": census.faces,
            "total": census.total,
            "euler": census.euler,
        }));
    }
    to_json(&json!({ "n": n, "levels": levels }))
}

#[derive(Deserialize)]
struct IteratedInput {
    n: usize,
    maximal: Vec<Vec<(ProcessId, u32)>>,
    nodes: std::collections::BTreeMap<u32, NodeInfo>,
}

fn export(text: &str, format: Format) -> Outcome {
    let value: Value = serde_json::from_str(text).map_err(|e| Failure::usage(format!("bad JSON: {e}")))?;
    if value.get("nodes").is_some() {
        let input: IteratedInput =
            serde_json::from_value(value).map_err(|e| Failure::usage(format!("bad iterated complex: {e}")))?;
        let tower = Tower::from_nodes(input.n, input.nodes)?;
        let maximal: Vec<Simplex<Node>> = input
            .maximal
            .into_iter()
            .map(|s| s.into_iter().map(Node::from).collect())
            .collect();
        let c = Complex::closure(input.n, maximal)?;
        let pos = |v: &Node| tower.position(*v);
        return Ok(match format {
            Format::Dot => to_dot(&c, |v| v.key.to_string(), pos)?,
            Format::Off => to_off(&c, pos)?,
        }
        .trim_end()
        .to_string());
    }
    let c: Complex<Vertex> =
        serde_json::from_value(value).map_err(|e| Failure::usage(format!("bad complex: {e}")))?;
    Ok(match format {
        Format::Dot => to_dot(&c, |v| v.to_string(), vertex_position)?,
        Format::Off => to_off(&c, vertex_position)?,
    }
    .trim_end()
    .to_string())
}
