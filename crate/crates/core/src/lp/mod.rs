//! Exact rational linear programming.
//!
//! Problems are `min cᵀx  s.t.  A x = b,  x_j >= 0 for j in nonneg`. The
//! solver is a two-phase tableau simplex under Bland's rule over
//! lowest-terms rationals; there are no tolerances. Every outcome carries
//! evidence that [`LpOutcome::verify`] checks by substitution.

mod linsolve;
mod simplex;

pub use linsolve::{rational_rank, solve_rational};
pub use simplex::lp_solve;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::linalg::IntegerMatrix;
use crate::{par, Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |m: String| Error::Parse { line: 0, message: m };
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|e| bad(format!("bad rational {s:?}: {e}"))),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|e| bad(format!("bad numerator in {s:?}: {e}")))?;
            let q: BigInt = q.trim().parse().map_err(|e| bad(format!("bad denominator in {s:?}: {e}")))?;
            if q.is_zero() {
                return Err(bad(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Rows of equal length; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Self { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("rows of equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Self {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                y.len(),
                self.rows
            )));
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += a * yi;
                }
            }
        }
        Ok(out)
    }
}

impl From<&IntegerMatrix> for RationalMatrix {
    fn from(a: &IntegerMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            data: a.entries().iter().cloned().map(Rational::from_integer).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for RationalMatrix {
    type Err = Error;

    /// Whitespace-separated `p/q` entries, one row per line.
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split_whitespace().map(parse_rational).collect())
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows)
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    /// Minimised.
    pub objective: Vec<Rational>,
    pub eq_matrix: RationalMatrix,
    pub eq_rhs: Vec<Rational>,
    pub nonneg: BTreeSet<usize>,
}

impl LinearProgram {
    /// All variables nonnegative.
    pub fn standard(objective: Vec<Rational>, eq_matrix: RationalMatrix, eq_rhs: Vec<Rational>) -> Self {
        let nonneg = (0..objective.len()).collect();
        Self {
            objective,
            eq_matrix,
            eq_rhs,
            nonneg,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn check_dims(&self) -> Result<()> {
        let n = self.objective.len();
        if self.eq_matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "objective has {n} entries, constraint matrix {} columns",
                self.eq_matrix.cols()
            )));
        }
        if self.eq_matrix.rows() != self.eq_rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} constraint rows, {} right-hand sides",
                self.eq_matrix.rows(),
                self.eq_rhs.len()
            )));
        }
        if let Some(&j) = self.nonneg.iter().find(|&&j| j >= n) {
            return Err(Error::DimensionMismatch(format!(
                "nonnegativity index {j} out of range for {n} variables"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub primal: Option<Vec<Rational>>,
    /// `y` with `Aᵀy <= c` on nonnegative variables and `= c` on free ones.
    pub dual: Option<Vec<Rational>>,
    pub objective_value: Option<Rational>,
    /// `y` with `yᵀA >= 0` on nonnegative variables, `= 0` on free ones, and
    /// `yᵀb < 0`.
    pub infeasibility_certificate: Option<Vec<Rational>>,
    /// Direction `d` with `A d = 0`, `d >= 0` on nonnegative variables and
    /// `cᵀd < 0`, when a feasible point exists.
    pub unbounded_ray: Option<Vec<Rational>>,
}

impl LpOutcome {
    /// Rechecks the evidence for the reported status against `p`.
    pub fn verify(&self, p: &LinearProgram) -> bool {
        match self.status {
            LpStatus::Optimal => {
                let (Some(x), Some(y), Some(v)) = (&self.primal, &self.dual, &self.objective_value)
                else {
                    return false;
                };
                primal_feasible(p, x)
                    && dual_feasible(p, y)
                    && dot(&p.objective, x) == *v
                    && dot(&p.eq_rhs, y) == *v
            }
            LpStatus::Infeasible => self
                .infeasibility_certificate
                .as_ref()
                .is_some_and(|y| verify_farkas(&p.eq_matrix, &p.eq_rhs, &p.nonneg, y)),
            LpStatus::Unbounded => {
                let (Some(x), Some(d)) = (&self.primal, &self.unbounded_ray) else {
                    return false;
                };
                primal_feasible(p, x)
                    && p.eq_matrix.mul_vec(d).is_ok_and(|ad| ad.iter().all(Zero::is_zero))
                    && p.nonneg.iter().all(|&j| !d[j].is_negative())
                    && dot(&p.objective, d).is_negative()
            }
        }
    }
}

pub fn primal_feasible(p: &LinearProgram, x: &[Rational]) -> bool {
    x.len() == p.num_vars()
        && p.nonneg.iter().all(|&j| !x[j].is_negative())
        && p.eq_matrix.mul_vec(x).is_ok_and(|ax| ax == p.eq_rhs)
}

pub fn dual_feasible(p: &LinearProgram, y: &[Rational]) -> bool {
    let Ok(aty) = p.eq_matrix.tr_mul_vec(y) else {
        return false;
    };
    aty.iter().zip(&p.objective).enumerate().all(|(j, (a, c))| {
        if p.nonneg.contains(&j) {
            a <= c
        } else {
            a == c
        }
    })
}

/// Checks `yᵀA >= 0` on `nonneg`, `yᵀA = 0` elsewhere, `yᵀb < 0`.
pub fn verify_farkas(
    a: &RationalMatrix,
    b: &[Rational],
    nonneg: &BTreeSet<usize>,
    y: &[Rational],
) -> bool {
    let Ok(yta) = a.tr_mul_vec(y) else {
        return false;
    };
    yta.iter().enumerate().all(|(j, v)| {
        if nonneg.contains(&j) {
            !v.is_negative()
        } else {
            v.is_zero()
        }
    }) && y.len() == b.len()
        && dot(y, b).is_negative()
}

/// Classical Farkas certificate for `{x >= 0 : A x = b} = ∅`: `y` with
/// `yᵀA >= 0` and `yᵀb < 0`.
pub fn farkas_certificate(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let p = LinearProgram::standard(vec![Rational::zero(); a.cols()], a.clone(), b.to_vec());
    let out = lp_solve(&p)?;
    match (out.status, out.infeasibility_certificate) {
        (LpStatus::Infeasible, Some(y)) if verify_farkas(a, b, &p.nonneg, &y) => Ok(y),
        (LpStatus::Infeasible, _) => Err(Error::Defect("unverifiable Farkas certificate".into())),
        _ => Err(Error::RegionFeasible),
    }
}

/// Indices `i` with `x_i = 0` for every `x >= 0` satisfying `A x = b`.
///
/// One LP per coordinate: maximise `x_i` over the feasible set; the
/// coordinate is forced iff the maximum is 0.
pub fn forced_zero_coordinates(a: &RationalMatrix, b: &[Rational]) -> Result<BTreeSet<usize>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows against {} right-hand sides",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let feasibility = lp_solve(&LinearProgram::standard(
        vec![Rational::zero(); n],
        a.clone(),
        b.to_vec(),
    ))?;
    if feasibility.status == LpStatus::Infeasible {
        return Err(Error::Infeasible);
    }
    let forced = par::try_map(&(0..n).collect::<Vec<_>>(), |&i| -> Result<bool> {
        // max x_i: forced iff the optimum is 0; unbounded means not forced
        let mut objective = vec![Rational::zero(); n];
        objective[i] = int(-1);
        let out = lp_solve(&LinearProgram::standard(objective, a.clone(), b.to_vec()))?;
        match out.status {
            LpStatus::Optimal => Ok(out.objective_value.is_some_and(|v| v.is_zero())),
            LpStatus::Unbounded => Ok(false),
            _ => Err(Error::Defect(format!(
                "coordinate LP for x_{i} returned {:?} on a feasible system",
                out.status
            ))),
        }
    })?;
    Ok(forced
        .into_iter()
        .enumerate()
        .filter_map(|(i, f)| f.then_some(i))
        .collect())
}
