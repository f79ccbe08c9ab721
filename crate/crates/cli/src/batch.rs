//! `batch`: run one single-input subcommand over every file in a directory.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::commands::{self, Emission};
use crate::error::{CliError, CliResult};
use crate::input;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BatchKind {
    Snf,
    Cokernel,
    Jacobian,
    Trees,
    Intdual,
    Reversible,
    Certify,
    Entropy,
    Lp,
}

pub fn run_one(kind: BatchKind, path: &Path) -> CliResult<Emission> {
    match kind {
        BatchKind::Snf => commands::snf(&input::matrix_file(path)?),
        BatchKind::Cokernel => commands::cokernel(&input::matrix_file(path)?),
        BatchKind::Jacobian => commands::jacobian(&input::graph_file(path)?),
        BatchKind::Trees => commands::trees(&input::graph_file(path)?),
        BatchKind::Intdual => commands::intdual(&input::matrix_file(path)?, None),
        BatchKind::Reversible => commands::reversible(&input::matrix_file(path)?),
        BatchKind::Certify => commands::certify(&input::problem_from_json(&input::json_file(path)?)?),
        BatchKind::Entropy => commands::entropy(&input::chain_from_json(&input::json_file(path)?)?),
        BatchKind::Lp => commands::lp(&input::lp_from_json(&input::json_file(path)?)?),
    }
}

fn instance_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::new("io", e.to_string()).at_path(dir))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

fn one_result(kind: BatchKind, path: &Path) -> (Value, i32, bool) {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
    match run_one(kind, path) {
        Ok(em) => (
            json!({"file": name, "exit_code": em.exit_code(), "document": em.to_json()}),
            em.exit_code(),
            em.verified,
        ),
        Err(e) => (
            json!({"file": name, "exit_code": 2, "document": {"error": e.to_json()}}),
            2,
            false,
        ),
    }
}

#[cfg(feature = "parallel")]
fn map_files(files: &[PathBuf], jobs: usize, f: impl Fn(&Path) -> (Value, i32, bool) + Sync) -> CliResult<Vec<(Value, i32, bool)>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::new("usage", e.to_string()))?;
    Ok(pool.install(|| files.par_iter().map(|p| f(p)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn map_files(files: &[PathBuf], _jobs: usize, f: impl Fn(&Path) -> (Value, i32, bool)) -> CliResult<Vec<(Value, i32, bool)>> {
    Ok(files.iter().map(|p| f(p)).collect())
}

/// Exit code of the batch is the worst instance code.
pub fn batch(dir: &Path, kind: BatchKind, jobs: usize) -> CliResult<Emission> {
    if jobs == 0 {
        return Err(CliError::new("usage", "--jobs must be at least 1"));
    }
    let files = instance_files(dir)?;
    let results = map_files(&files, jobs, |p| one_result(kind, p))?;
    let worst = results.iter().map(|r| r.1).max().unwrap_or(0);
    let verified = results.iter().all(|r| r.2);
    let negatives = results.iter().filter(|r| r.1 == 1).count();
    let body = json!({
        "input": {"directory": dir.display().to_string(), "subcommand": format!("{kind:?}").to_lowercase()},
        "instances": results.len(),
        "negatives": negatives,
        "results": results.into_iter().map(|r| r.0).collect::<Vec<_>>(),
    });
    let Value::Object(body) = body else { unreachable!() };
    Ok(Emission {
        command: "batch",
        body,
        verified,
        negative: worst >= 1,
    })
}
