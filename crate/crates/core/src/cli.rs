//! The `cartan` command line.
//!
//! Results go to standard output as JSON (DOT for `export-dot`). Failures
//! print a JSON object with an `error` field to standard error and exit
//! with 1 for usage and parse errors, 2 for domain errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{self, minor_sequence, GenCoxeterDiagram};
use crate::diagram::{parse_orient_spec, parse_with_directions};
use crate::exactnum::format_rational;
use crate::roots::{self, Guard};
use crate::{CartanError, CartanMatrix, CoxeterDiagram, DiagramError, DynkinDiagram};

/// Environment variable holding the worker count for parallel work.
pub const WORKERS_ENV: &str = "CARTAN_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "cartan", version, about = "Cartan matrices, Coxeter/Dynkin diagrams and root systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Cartan matrix axioms.
    Validate {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print the symmetrised matrix and scale factors.
    Symmetrise {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Decide positive definiteness of a connected diagram.
    Classify(Input),
    /// Minor sequence of a chain read in vertex order.
    Minors {
        #[arg(long)]
        diagram: String,
    },
    /// Classify every connected tree (and optionally one-cycle diagram) up to a rank.
    Enumerate {
        #[arg(long)]
        max_rank: usize,
        /// Also one-cycle diagrams, up to --cycle-max-rank if given.
        #[arg(long)]
        cycles: bool,
        #[arg(long)]
        cycle_max_rank: Option<usize>,
    },
    /// Generate and verify the root system.
    Roots {
        #[command(flatten)]
        input: Input,
        /// Directions of multiple lines, "i>j[,i>j...]", meaning i=>j.
        #[arg(long)]
        orient: Option<String>,
        #[arg(long, default_value_t = 30)]
        guard: i64,
    },
    /// Graphviz rendering.
    ExportDot(Input),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Inline diagram notation, e.g. "*-*=>*-*".
    #[arg(long)]
    diagram: Option<String>,
    /// Cartan matrix JSON file.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

/// Something that ends a run early.
struct Failure {
    code: i32,
    body: Value,
}

fn usage(kind: &str, message: impl ToString) -> Failure {
    Failure { code: 1, body: json!({"error": kind, "message": message.to_string()}) }
}

fn domain(kind: &str, message: impl ToString, extra: Value) -> Failure {
    let mut body = json!({"error": kind, "message": message.to_string()});
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    Failure { code: 2, body }
}

fn cartan_failure(e: CartanError) -> Failure {
    match &e {
        CartanError::Axioms(v) => domain("axiom_violation", &e, json!({"violations": v.iter().map(|x| json!({
            "axiom": format!("{:?}", x.axiom),
            "i": x.i + 1,
            "j": x.j + 1,
            "detail": x.detail,
        })).collect::<Vec<_>>()})),
        CartanError::NotSymmetrisable { cycle } => {
            domain("not_symmetrisable", &e, json!({"cycle": cycle.iter().map(|i| i + 1).collect::<Vec<_>>()}))
        }
        _ => usage("parse", e),
    }
}

fn diagram_failure(e: DiagramError) -> Failure {
    match e {
        DiagramError::MissingDirection(..) | DiagramError::BadDirection(..) | DiagramError::Cycle => {
            domain("orientation", e, json!({}))
        }
        _ => usage("parse", e),
    }
}

/// Runs the command line `argv` (program name first), writing results to
/// `out` and errors to `err`; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"error": "usage", "message": e.to_string()}));
            return 1;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "{}", f.body);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{v}").map_err(|e| usage("io", e))
}

fn read_matrix(path: &Path) -> Result<CartanMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("io", format!("{}: {e}", path.display())))?;
    CartanMatrix::from_json(&text).map_err(cartan_failure)
}

/// Diagram from either input, with the directions it carries.
fn read_input(input: &Input) -> Result<(CoxeterDiagram, Vec<(usize, usize)>), Failure> {
    match (&input.diagram, &input.matrix) {
        (Some(text), _) => parse_with_directions(text).map_err(diagram_failure),
        (None, Some(path)) => {
            let dynkin = DynkinDiagram::of_cartan(&read_matrix(path)?);
            Ok((dynkin.coxeter().clone(), dynkin.directions()))
        }
        (None, None) => Err(usage("usage", "one of --diagram or --matrix is required")),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate { matrix } => {
            let a = read_matrix(&matrix)?;
            let components: Vec<Vec<usize>> =
                a.components().blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
            emit(out, &json!({"valid": true, "rank": a.rank(), "components": components}))
        }
        Command::Symmetrise { matrix } => {
            let sym = read_matrix(&matrix)?.symmetrise().map_err(cartan_failure)?;
            emit(out, &serde_json::to_value(sym.to_json()).expect("serialisable"))
        }
        Command::Classify(input) => {
            let (d, _) = read_input(&input)?;
            let res = classify::classify_connected(&d).map_err(|e| domain("classify", e, json!({})))?;
            emit(out, &res.to_json(serde_json::to_value(d.to_json()).expect("serialisable")))
        }
        Command::Minors { diagram } => {
            let (d, _) = parse_with_directions(&diagram).map_err(diagram_failure)?;
            let t = GenCoxeterDiagram::from_coxeter(&d)
                .subdiagonal()
                .ok_or_else(|| domain("not_a_chain", "every line must join consecutive vertices", json!({})))?;
            let seq = minor_sequence(&t);
            emit(
                out,
                &json!({
                    "p": seq.p.iter().map(format_rational).collect::<Vec<_>>(),
                    "first_nonpositive": seq.first_nonpositive,
                    "positive": seq.is_positive(),
                }),
            )
        }
        Command::Enumerate { max_rank, cycles, cycle_max_rank } => {
            let cycle_rank = if cycles { cycle_max_rank.unwrap_or(max_rank) } else { 0 };
            let work = || -> Result<Vec<(CoxeterDiagram, classify::ClassificationResult)>, classify::ClassifyError> {
                let diagrams =
                    classify::enumerate_connected_bounded(max_rank, cycle_rank, classify::DEFAULT_RANK_BOUND)?;
                diagrams
                    .into_par_iter()
                    .map(|d| classify::classify_connected(&d).map(|r| (d, r)))
                    .collect()
            };
            let results = with_workers(work).map_err(|e| domain("enumerate", e, json!({})))?;
            let mut families = BTreeSet::new();
            let mut pd = 0;
            for (d, r) in &results {
                if let classify::Verdict::PositiveDefinite { family, rank } = r.verdict {
                    pd += 1;
                    families.insert((family, rank));
                }
                emit(out, &r.to_json(serde_json::to_value(d.to_json()).expect("serialisable")))?;
            }
            let names: Vec<String> = families.iter().map(|(f, l)| format!("{f}_{l}")).collect();
            emit(out, &json!({"summary": {"diagrams": results.len(), "positive_definite": pd, "families": names}}))
        }
        Command::Roots { input, orient, guard } => {
            let a = match (&input.diagram, &input.matrix) {
                (Some(text), _) => {
                    let (d, mut dirs) = parse_with_directions(text).map_err(diagram_failure)?;
                    if let Some(spec) = &orient {
                        dirs.extend(parse_orient_spec(spec).map_err(diagram_failure)?);
                    }
                    d.orient(&dirs).map_err(diagram_failure)?
                }
                (None, Some(path)) => read_matrix(path)?,
                (None, None) => return Err(usage("usage", "one of --diagram or --matrix is required")),
            };
            let rs = roots::generate_roots_with(&a, Guard::with_coefficient(guard)).map_err(|e| match e {
                roots::RootsError::NotSymmetrisable(c) => cartan_failure(c),
                roots::RootsError::NotFiniteWithinGuard(t) => {
                    let extra = match &t {
                        roots::GuardTrigger::Coefficient { bound, root } => {
                            json!({"trigger": "coefficient", "bound": bound, "root": root})
                        }
                        roots::GuardTrigger::Count { limit } => json!({"trigger": "count", "limit": limit}),
                    };
                    domain("not_finite_within_guard", t, extra)
                }
                e => domain("roots", e, json!({})),
            })?;
            let mut body = rs.to_json();
            body["verification"] = serde_json::to_value(roots::verify_root_system(&rs)).expect("serialisable");
            emit(out, &body)
        }
        Command::ExportDot(input) => {
            let (d, dirs) = read_input(&input)?;
            let text = match DynkinDiagram::new(d.clone(), &dirs) {
                Ok(dynkin) if !dirs.is_empty() => dynkin.to_dot(),
                _ => d.to_dot(),
            };
            write!(out, "{text}").map_err(|e| usage("io", e))
        }
    }
}

/// Runs `f` on a pool sized by [`WORKERS_ENV`], or the global pool.
fn with_workers<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let n = std::env::var(WORKERS_ENV).ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
    match n.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
