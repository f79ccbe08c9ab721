use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::bareiss_determinant;
use super::IntegerMatrix;
use crate::{Error, Result};

/// Largest dimension accepted by the minor-enumeration oracle.
pub const MAX_ORACLE_DIM: usize = 8;

/// Determinantal divisors `g_1, ..., g_min(m,n)`: `g_k` is the gcd of all
/// `k x k` minors (zero when they all vanish).
///
/// Enumerates every minor, so cost is exponential; intended as an
/// independent check on [`super::smith_normal_form`].
pub fn determinantal_divisors(a: &IntegerMatrix) -> Result<Vec<BigInt>> {
    if a.rows() > MAX_ORACLE_DIM || a.cols() > MAX_ORACLE_DIM {
        return Err(Error::CapExceeded {
            what: "determinantal divisor oracle dimension",
            needed: a.rows().max(a.cols()) as u128,
            cap: MAX_ORACLE_DIM as u128,
        });
    }
    let mut out = Vec::new();
    for k in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rs in combinations(a.rows(), k) {
            for cs in combinations(a.cols(), k) {
                let minor = a.select(&rs, &cs).to_rows();
                g = g.gcd(&bareiss_determinant(minor));
            }
        }
        out.push(g);
    }
    Ok(out)
}

/// All k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
