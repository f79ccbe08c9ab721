//! JSON encoding of exact values. Integers that carry data are decimal
//! strings; rationals are `"p/q"` (or `"p"` when integral).

use std::collections::BTreeSet;

use ethic_dual::graph::{Divisor, Graph};
use ethic_dual::homology::FgAbelianGroup;
use ethic_dual::linalg::IntegerMatrix;
use ethic_dual::lp::{parse_rational, Rational, RationalMatrix};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn small_ints(xs: &[i64]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn rat(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn rats(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

pub fn opt<T: ?Sized>(x: Option<&T>, f: impl Fn(&T) -> Value) -> Value {
    x.map_or(Value::Null, f)
}

pub fn matrix(m: &IntegerMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.to_rows().iter().map(|r| ints(r)).collect::<Vec<_>>(),
    })
}

pub fn rmatrix(m: &RationalMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.to_rows().iter().map(|r| rats(r)).collect::<Vec<_>>(),
    })
}

pub fn group(g: &FgAbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "torsion_factors": ints(g.torsion_factors()),
        "torsion_order": int(&g.torsion_order()),
        "display": g.to_string(),
    })
}

pub fn graph(g: &Graph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "edges": g.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

pub fn index_set(s: &BTreeSet<usize>) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

pub fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| CliError::new("schema", format!("missing field `{key}`")))
}

fn schema_err(what: &str, v: &Value) -> CliError {
    CliError::new("schema", format!("expected {what}, found {v}"))
}

pub fn array(v: &Value) -> CliResult<&Vec<Value>> {
    v.as_array().ok_or_else(|| schema_err("an array", v))
}

pub fn to_int(v: &Value) -> CliResult<BigInt> {
    match v {
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| schema_err("a decimal integer", v)),
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| schema_err("an integer", v)),
        _ => Err(schema_err("an integer", v)),
    }
}

pub fn to_ints(v: &Value) -> CliResult<Vec<BigInt>> {
    array(v)?.iter().map(to_int).collect()
}

pub fn to_small(v: &Value) -> CliResult<i64> {
    i64::try_from(to_int(v)?).map_err(|_| schema_err("a 64-bit integer", v))
}

pub fn to_small_ints(v: &Value) -> CliResult<Vec<i64>> {
    array(v)?.iter().map(to_small).collect()
}

pub fn to_usize(v: &Value) -> CliResult<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
        .ok_or_else(|| schema_err("a nonnegative index", v))
}

pub fn to_usizes(v: &Value) -> CliResult<Vec<usize>> {
    array(v)?.iter().map(to_usize).collect()
}

pub fn to_rat(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(CliError::from),
        Value::Number(_) => Ok(Rational::from_integer(to_int(v)?)),
        _ => Err(schema_err("a rational \"p/q\"", v)),
    }
}

pub fn to_rats(v: &Value) -> CliResult<Vec<Rational>> {
    array(v)?.iter().map(to_rat).collect()
}

pub fn opt_field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

/// Rows of entries, either as `{rows, cols, entries}` or a bare array of
/// rows (then `cols` comes from the first row or the hint).
fn rows_of<T>(
    v: &Value,
    cols_hint: Option<usize>,
    f: impl Fn(&Value) -> CliResult<T>,
) -> CliResult<(usize, usize, Vec<Vec<T>>)> {
    let (entries, rows, cols) = match v {
        Value::Object(_) => (
            array(field(v, "entries")?)?,
            Some(to_usize(field(v, "rows")?)?),
            Some(to_usize(field(v, "cols")?)?),
        ),
        Value::Array(a) => (a, None, None),
        _ => return Err(schema_err("a matrix", v)),
    };
    let data: Vec<Vec<T>> = entries
        .iter()
        .map(|r| array(r)?.iter().map(&f).collect())
        .collect::<CliResult<_>>()?;
    let cols = cols
        .or(cols_hint)
        .or_else(|| data.first().map(Vec::len))
        .unwrap_or(0);
    let rows = rows.unwrap_or(data.len());
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(CliError::new(
            "dimension_mismatch",
            format!("matrix entries do not form a {rows}x{cols} array"),
        ));
    }
    Ok((rows, cols, data))
}

pub fn to_matrix(v: &Value, cols_hint: Option<usize>) -> CliResult<IntegerMatrix> {
    let (rows, cols, data) = rows_of(v, cols_hint, to_int)?;
    Ok(IntegerMatrix::new(rows, cols, data.into_iter().flatten().collect())?)
}

pub fn to_rmatrix(v: &Value, cols_hint: Option<usize>) -> CliResult<RationalMatrix> {
    let (_, cols, data) = rows_of(v, cols_hint, to_rat)?;
    Ok(RationalMatrix::from_rows(cols, data)?)
}

pub fn to_graph(v: &Value) -> CliResult<Graph> {
    let n = to_usize(field(v, "vertices")?)?;
    let edges = array(field(v, "edges")?)?
        .iter()
        .map(|e| {
            let pair = to_usizes(e)?;
            match pair[..] {
                [u, w] => Ok((u, w)),
                _ => Err(schema_err("an edge pair", e)),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Graph::new(n, edges)?)
}

pub fn to_divisor(v: &Value) -> CliResult<Divisor> {
    Ok(Divisor::new(to_small_ints(v)?))
}

pub fn to_bool(v: &Value) -> CliResult<bool> {
    v.as_bool().ok_or_else(|| schema_err("a boolean", v))
}

pub fn to_index_set(v: &Value) -> CliResult<BTreeSet<usize>> {
    Ok(to_usizes(v)?.into_iter().collect())
}
