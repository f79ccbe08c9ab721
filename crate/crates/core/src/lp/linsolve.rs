use num_traits::{One, Zero};

use super::{Rational, RationalMatrix};
use crate::{Error, Result};

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..m[i].len() {
                let delta = &f * &m[r][j];
                m[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some rational solution of `A x = b`, or `None` if inconsistent.
pub fn solve_rational(a: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows against {} right-hand sides",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let mut m: Vec<Vec<Rational>> = a
        .to_rows()
        .into_iter()
        .zip(b)
        .map(|(mut r, bi)| {
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    let rank = pivots.len();
    if m[rank..].iter().any(|r| !r[n].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][n].clone();
    }
    Ok(Some(x))
}

pub fn rational_rank(a: &RationalMatrix) -> usize {
    let mut m = a.to_rows();
    rref(&mut m, a.cols()).len()
}
