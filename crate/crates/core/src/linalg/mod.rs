//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! No floating point is used anywhere in this module.

mod hermite;
mod matrix;
mod oracle;
mod smith;
mod solve;

pub use hermite::hermite_normal_form;
pub use matrix::IntegerMatrix;
pub(crate) use matrix::parse_ints;
pub use oracle::{determinantal_divisors, MAX_ORACLE_DIM};
pub use smith::{smith_normal_form, SmithDecomposition};
pub use solve::{kernel_basis, solve_integer, IntegerSolution};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Floor division `a / b` together with the remainder in `[0, |b|)`.
pub(crate) fn div_rem_euclid(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let (q, r) = a.div_mod_floor(b);
    if r < BigInt::zero() {
        // b < 0 with a nonzero floor remainder
        (q + 1, r - b)
    } else {
        (q, r)
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
