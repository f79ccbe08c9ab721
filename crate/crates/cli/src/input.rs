//! Input file formats.

use std::path::Path;

use ethic_dual::dynamics::MorphismChain;
use ethic_dual::facial::{IntegerBlock, RationalBlock, UnifiedProblem};
use ethic_dual::graph::{Divisor, Graph};
use ethic_dual::linalg::IntegerMatrix;
use ethic_dual::lp::LinearProgram;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::json::{self as j, field, opt_field};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::new("io", e.to_string()).at_path(path))
}

fn parse_file<T>(path: &Path) -> CliResult<T>
where
    T: std::str::FromStr<Err = ethic_dual::Error>,
{
    read_text(path)?
        .parse()
        .map_err(|e: ethic_dual::Error| CliError::from(e).at_path(path))
}

pub fn matrix_file(path: &Path) -> CliResult<IntegerMatrix> {
    parse_file(path)
}

pub fn graph_file(path: &Path) -> CliResult<Graph> {
    parse_file(path)
}

pub fn divisor_file(path: &Path) -> CliResult<Divisor> {
    parse_file(path)
}

/// Whitespace-separated integers; `#` starts a comment line.
pub fn vector_file(path: &Path) -> CliResult<Vec<BigInt>> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let x = tok.parse().map_err(|_| {
                CliError::new("parse", format!("`{tok}` is not an integer"))
                    .with("line", json!(i + 1))
                    .at_path(path)
            })?;
            out.push(x);
        }
    }
    Ok(out)
}

pub fn json_file(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::from(e).at_path(path))
}

/// `{objective, eq_matrix, eq_rhs, nonneg}`; `nonneg` defaults to every
/// variable.
pub fn lp_from_json(v: &Value) -> CliResult<LinearProgram> {
    let objective = j::to_rats(field(v, "objective")?)?;
    let n = objective.len();
    let p = LinearProgram {
        eq_matrix: j::to_rmatrix(field(v, "eq_matrix")?, Some(n))?,
        eq_rhs: j::to_rats(field(v, "eq_rhs")?)?,
        nonneg: match opt_field(v, "nonneg") {
            Some(idx) => j::to_index_set(idx)?,
            None => (0..n).collect(),
        },
        objective,
    };
    p.check_dims()?;
    Ok(p)
}

pub fn lp_to_json(p: &LinearProgram) -> Value {
    json!({
        "objective": j::rats(&p.objective),
        "eq_matrix": j::rmatrix(&p.eq_matrix),
        "eq_rhs": j::rats(&p.eq_rhs),
        "nonneg": j::index_set(&p.nonneg),
    })
}

fn rational_block(v: &Value) -> CliResult<RationalBlock> {
    let c = j::to_rats(field(v, "c")?)?;
    Ok(RationalBlock {
        a: j::to_rmatrix(field(v, "A")?, Some(c.len()))?,
        b: j::to_rats(field(v, "b")?)?,
        c,
    })
}

/// Optional blocks `integer`, `real`, `conic`, each `{A, b, c}`.
pub fn problem_from_json(v: &Value) -> CliResult<UnifiedProblem> {
    if !v.is_object() {
        return Err(CliError::new("schema", "problem must be a JSON object"));
    }
    let integer = match opt_field(v, "integer") {
        Some(z) => {
            let c = j::to_ints(field(z, "c")?)?;
            Some(IntegerBlock {
                a: j::to_matrix(field(z, "A")?, Some(c.len()))?,
                b: j::to_ints(field(z, "b")?)?,
                c,
            })
        }
        None => None,
    };
    let p = UnifiedProblem {
        integer,
        real: opt_field(v, "real").map(rational_block).transpose()?,
        conic: opt_field(v, "conic").map(rational_block).transpose()?,
    };
    p.check_dims()?;
    Ok(p)
}

pub fn problem_to_json(p: &UnifiedProblem) -> Value {
    let block = |b: &RationalBlock| json!({"A": j::rmatrix(&b.a), "b": j::rats(&b.b), "c": j::rats(&b.c)});
    json!({
        "integer": j::opt(p.integer.as_ref(), |z| json!({"A": j::matrix(&z.a), "b": j::ints(&z.b), "c": j::ints(&z.c)})),
        "real": j::opt(p.real.as_ref(), block),
        "conic": j::opt(p.conic.as_ref(), block),
    })
}

/// A list of matrices, each in the matrix text format given as an array of
/// lines (or a single string). Matrix objects are also accepted.
pub fn chain_from_json(v: &Value) -> CliResult<MorphismChain> {
    let steps = j::array(v)?
        .iter()
        .enumerate()
        .map(|(t, m)| {
            let text = match m {
                Value::String(s) => s.clone(),
                Value::Array(lines) if lines.iter().all(Value::is_string) => lines
                    .iter()
                    .map(|l| l.as_str().unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join("\n"),
                Value::Object(_) => return j::to_matrix(m, None),
                _ => return Err(CliError::new("schema", format!("step {} is not a matrix", t + 1))),
            };
            text.parse::<IntegerMatrix>()
                .map_err(|e| CliError::from(e).with("step", json!(t + 1)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(MorphismChain::new(steps)?)
}

pub fn chain_to_json(c: &MorphismChain) -> Value {
    Value::Array(c.steps().iter().map(j::matrix).collect())
}
