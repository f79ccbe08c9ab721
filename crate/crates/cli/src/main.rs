//! `ethic-dual`: exact duality certificates from the command line.
//!
//! Every subcommand prints one JSON document (schema `ethic-dual/1`) whose
//! `verified` field is recomputed by substitution before emission. Exit
//! codes: 0 computed, 1 certified negative, 2 input error.

mod batch;
mod commands;
mod error;
mod input;
mod json;
mod recheck;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ethic_dual::graph::FiringStrategy;
use ethic_dual::intdual::ShiftLattice;
use serde_json::{json, Value};

use crate::batch::BatchKind;
use crate::commands::{Emission, SCHEMA};
use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "ethic-dual", version, about = "Exact duality certificates over Z, Q and the nonnegative orthant")]
struct Cli {
    /// Write the JSON document to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Re-verify a previously emitted JSON document.
    #[arg(long, value_name = "CERT_JSON")]
    recheck: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Maximal,
    Single,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Lattice {
    Box,
    Reachable,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form with transforms.
    Snf { matrix: PathBuf },
    /// Cokernel Z^m / im A as free rank plus invariant factors.
    Cokernel { matrix: PathBuf },
    /// Jacobian (sandpile group) of a graph.
    Jacobian { graph: PathBuf },
    /// Number of spanning trees.
    Trees { graph: PathBuf },
    /// q-reduced representative of a divisor class.
    Reduce {
        graph: PathBuf,
        divisor: PathBuf,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, value_enum, default_value = "maximal")]
        strategy: Strategy,
    },
    /// Baker-Norine rank of a divisor.
    Rank {
        graph: PathBuf,
        divisor: PathBuf,
        /// Largest effective-divisor degree to enumerate.
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Evaluate both sides of Riemann-Roch for a divisor.
    RrCheck {
        graph: PathBuf,
        divisor: PathBuf,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Nonnegative integer feasibility of A x = b with a certificate.
    Farkas {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Maximum number of shift exponents.
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long, value_enum, default_value = "box")]
        lattice: Lattice,
    },
    /// Torsion certificate of coker A, optionally with an adjoint solve.
    Intdual {
        matrix: PathBuf,
        /// Cost vector c; solves Aᵀλ = -c over Z.
        #[arg(long)]
        cost: Option<PathBuf>,
    },
    /// Unified integer / real / conic strong-duality certificate.
    Certify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Ethic memory and entropy along a chain of integer maps.
    Entropy {
        #[arg(long)]
        chain: PathBuf,
    },
    /// Whether a square integer map leaves torsion in its cokernel.
    Reversible { matrix: PathBuf },
    /// Exact linear program from LP JSON.
    Lp { lp: PathBuf },
    /// Run a single-input subcommand over every file in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long = "command", value_enum)]
        kind: BatchKind,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Snf { .. } => "snf",
        Command::Cokernel { .. } => "cokernel",
        Command::Jacobian { .. } => "jacobian",
        Command::Trees { .. } => "trees",
        Command::Reduce { .. } => "reduce",
        Command::Rank { .. } => "rank",
        Command::RrCheck { .. } => "rr-check",
        Command::Farkas { .. } => "farkas",
        Command::Intdual { .. } => "intdual",
        Command::Certify { .. } => "certify",
        Command::Entropy { .. } => "entropy",
        Command::Reversible { .. } => "reversible",
        Command::Lp { .. } => "lp",
        Command::Batch { .. } => "batch",
    }
}

fn dispatch(c: &Command) -> CliResult<Emission> {
    use crate::input::*;
    match c {
        Command::Snf { matrix } => commands::snf(&matrix_file(matrix)?),
        Command::Cokernel { matrix } => commands::cokernel(&matrix_file(matrix)?),
        Command::Jacobian { graph } => commands::jacobian(&graph_file(graph)?),
        Command::Trees { graph } => commands::trees(&graph_file(graph)?),
        Command::Reduce { graph, divisor, q, strategy } => {
            let strategy = match strategy {
                Strategy::Maximal => FiringStrategy::Maximal,
                Strategy::Single => FiringStrategy::Single,
            };
            commands::reduce(&graph_file(graph)?, &divisor_file(divisor)?, *q, strategy)
        }
        Command::Rank { graph, divisor, cap } => {
            commands::rank(&graph_file(graph)?, &divisor_file(divisor)?, *cap)
        }
        Command::RrCheck { graph, divisor, cap } => {
            commands::rr_check(&graph_file(graph)?, &divisor_file(divisor)?, *cap)
        }
        Command::Farkas { matrix, rhs, cap, lattice } => {
            let lattice = match lattice {
                Lattice::Box => ShiftLattice::Box,
                Lattice::Reachable => ShiftLattice::Reachable,
            };
            commands::farkas(&matrix_file(matrix)?, &vector_file(rhs)?, *cap, lattice)
        }
        Command::Intdual { matrix, cost } => {
            let cost = cost.as_deref().map(vector_file).transpose()?;
            commands::intdual(&matrix_file(matrix)?, cost.as_deref())
        }
        Command::Certify { spec } => commands::certify(&problem_from_json(&json_file(spec)?)?),
        Command::Entropy { chain } => commands::entropy(&chain_from_json(&json_file(chain)?)?),
        Command::Reversible { matrix } => commands::reversible(&matrix_file(matrix)?),
        Command::Lp { lp } => commands::lp(&lp_from_json(&json_file(lp)?)?),
        Command::Batch { dir, kind, jobs } => batch::batch(dir, *kind, *jobs),
    }
}

fn error_document(command: &str, e: &CliError) -> Value {
    json!({"schema": SCHEMA, "command": command, "error": e.to_json()})
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).expect("serializable document");
    match out {
        Some(p) => std::fs::write(p, text + "\n")
            .map_err(|e| CliError::new("io", e.to_string()).at_path(p)),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::new("io", e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}

fn run(cli: &Cli) -> (Value, i32) {
    let (name, result) = match (&cli.recheck, &cli.command) {
        (Some(_), Some(_)) => (
            "none",
            Err(CliError::new("usage", "--recheck takes no subcommand")),
        ),
        (Some(path), None) => (
            "recheck",
            input::json_file(path).and_then(|doc| recheck::recheck(&doc)).map(|em| {
                // a failed recheck is a certified negative
                let code = if em.verified { 0 } else { 1 };
                (em.to_json(), code)
            }),
        ),
        (None, Some(c)) => (
            command_name(c),
            dispatch(c).map(|em| (em.to_json(), em.exit_code())),
        ),
        (None, None) => (
            "none",
            Err(CliError::new("usage", "a subcommand or --recheck is required")),
        ),
    };
    result.unwrap_or_else(|e| (error_document(name, &e), 2))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::new("usage", e.to_string().trim_end());
            println!("{}", serde_json::to_string_pretty(&error_document("none", &err)).expect("json"));
            std::process::exit(2);
        }
    };
    let (doc, code) = run(&cli);
    if let Err(e) = emit(&doc, cli.out.as_deref()) {
        eprintln!("{}", error_document("none", &e));
        std::process::exit(2);
    }
    std::process::exit(code);
}
