use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{div_rem_euclid, IntegerMatrix};

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U * A = H`, `U` unimodular, `H` in row echelon form
/// with positive pivots and every entry above a pivot reduced into
/// `[0, pivot)`. Zero rows of `H` sit at the bottom.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r.., keeping the smallest entry on top.
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&i, &j| h[(i, c)].abs().cmp(&h[(j, c)].abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let (q, rem) = div_rem_euclid(&h[(i, c)], &h[(r, c)]);
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                u.add_row_multiple(i, r, &neg);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let (q, _) = div_rem_euclid(&h[(i, c)], &pivot);
            if !q.is_zero() {
                let neg: BigInt = -q;
                h.add_row_multiple(i, r, &neg);
                u.add_row_multiple(i, r, &neg);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Pivot positions `(row, col)` of a matrix already in row echelon form.
pub(crate) fn pivots(h: &IntegerMatrix) -> Vec<(usize, usize)> {
    (0..h.rows())
        .filter_map(|i| (0..h.cols()).find(|&j| !h[(i, j)].is_zero()).map(|j| (i, j)))
        .collect()
}
