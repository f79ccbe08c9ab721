use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::hermite::{hermite_normal_form, pivots};
use super::smith::{smith_normal_form, SmithDecomposition};
use super::IntegerMatrix;
use crate::{Error, Result};

/// Integer solution set `particular + span_Z(kernel columns)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: IntegerMatrix,
}

/// Solves `A x = b` over the integers; `None` when no integer solution exists.
pub fn solve_integer(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<IntegerSolution>> {
    let snf = smith_normal_form(a);
    let Some(particular) = snf.particular_solution(b)? else {
        return Ok(None);
    };
    Ok(Some(IntegerSolution {
        particular,
        kernel: kernel_basis(a),
    }))
}

impl SmithDecomposition {
    /// Particular integer solution of `A x = b` for the matrix this
    /// decomposition was computed from. Reusable across many right-hand
    /// sides.
    pub fn particular_solution(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let (m, n) = (self.u.rows(), self.v.rows());
        if b.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {m} equations",
                b.len()
            )));
        }
        let c = self.u.mul_vec(b)?;
        let r = self.rank();
        let mut y = vec![BigInt::zero(); n];
        for i in 0..r {
            let (q, rem) = c[i].div_rem(&self.invariant_factors[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
        if c[r..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        self.v.mul_vec(&y).map(Some)
    }
}

/// Basis of the integer kernel lattice `{x : A x = 0}`, one vector per
/// column. The basis is saturated: every integer kernel vector is an integer
/// combination of the columns.
pub fn kernel_basis(a: &IntegerMatrix) -> IntegerMatrix {
    // U A^T = H; the rows of U against zero rows of H span the left kernel
    // of A^T, i.e. the kernel of A.
    let (h, u) = hermite_normal_form(&a.transpose());
    let rank = pivots(&h).len();
    let n = a.cols();
    let cols: Vec<Vec<BigInt>> = (rank..n).map(|i| u.row(i).to_vec()).collect();
    IntegerMatrix::from_columns(n, &cols).expect("kernel rows have length n")
}
