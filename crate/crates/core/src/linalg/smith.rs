//! Smith normal form with transformation matrices.
//!
//! Reduction selects the nonzero entry of minimal absolute value in the
//! working submatrix as pivot, which keeps intermediate entries small on the
//! dense inputs this crate sees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{div_rem_euclid, IntegerMatrix};

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Nonzero diagonal entries of `S`, positive and forming a divisibility
    /// chain.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors strictly greater than one: the cokernel torsion.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// Checks every structural claim against the original matrix by direct
    /// substitution.
    pub fn verify(&self, a: &IntegerMatrix) -> bool {
        let (m, n) = (a.rows(), a.cols());
        if self.u.rows() != m || !self.u.is_square() || self.v.rows() != n || !self.v.is_square()
        {
            return false;
        }
        if self.s.rows() != m || self.s.cols() != n || !self.s.is_diagonal() {
            return false;
        }
        let unimodular = |x: &IntegerMatrix| x.determinant().is_ok_and(|d| d.abs().is_one());
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return false;
        }
        let Ok(uav) = self.u.checked_mul(a).and_then(|ua| ua.checked_mul(&self.v)) else {
            return false;
        };
        if uav != self.s {
            return false;
        }
        let diag: Vec<BigInt> = (0..m.min(n)).map(|i| self.s[(i, i)].clone()).collect();
        let r = self.invariant_factors.len();
        if diag[..r] != self.invariant_factors[..] || diag[r..].iter().any(|d| !d.is_zero()) {
            return false;
        }
        self.invariant_factors.iter().all(|d| d.is_positive())
            && self
                .invariant_factors
                .windows(2)
                .all(|w| w[1].is_multiple_of(&w[0]))
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);

    let mut t = 0;
    'diag: while t < m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&s, t) else {
                break 'diag;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = div_rem_euclid(&s[(i, t)], &s[(t, t)]);
                let neg = -q;
                s.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = div_rem_euclid(&s[(t, j)], &s[(t, t)]);
                let neg = -q;
                s.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility.
            let p = s[(t, t)].clone();
            let bad_row =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            match bad_row {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let invariant_factors = (0..t).map(|i| s[(i, i)].clone()).collect();
    SmithDecomposition {
        u,
        s,
        v,
        invariant_factors,
    }
}

fn min_abs_entry(s: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                let unit = ax.is_one();
                best = Some(((i, j), ax));
                if unit {
                    return best.map(|b| b.0);
                }
            }
        }
    }
    best.map(|b| b.0)
}
