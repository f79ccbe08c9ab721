//! Integer component of the duality certificate: torsion of `coker A`
//! decides whether rational solvability lifts to integer solvability, and the
//! discrete Farkas lemma decides nonnegative integer feasibility.

mod farkas;

pub use farkas::{
    brute_force_feasibility, brute_force_feasibility_with_cap, discrete_farkas,
    discrete_farkas_with, farkas_shift_lattice, farkas_shift_lattice_with, FarkasConfig,
    FarkasOutcome, Separator, ShiftLattice, DEFAULT_BRUTE_FORCE_CAP, DEFAULT_SHIFT_CAP,
};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::linalg::{smith_normal_form, solve_integer, IntegerMatrix, SmithDecomposition};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerCertificate {
    pub snf: SmithDecomposition,
    pub torsion_free: bool,
    /// Invariant factors greater than one.
    pub offending_factors: Vec<BigInt>,
    /// `λ` with `Aᵀλ = -c`, when an adjoint solve was requested and succeeded.
    pub adjoint_multiplier: Option<Vec<BigInt>>,
}

impl IntegerCertificate {
    /// Re-derives every claim from `a` (and `c`, when a multiplier is
    /// attached) by substitution.
    pub fn verify(&self, a: &IntegerMatrix, c: Option<&[BigInt]>) -> bool {
        if !self.snf.verify(a) {
            return false;
        }
        let offending = self.snf.torsion_factors();
        if offending != self.offending_factors || self.torsion_free != offending.is_empty() {
            return false;
        }
        match (&self.adjoint_multiplier, c) {
            (None, _) => true,
            (Some(lambda), Some(c)) => adjoint_residual_is_zero(a, lambda, c),
            (Some(_), None) => false,
        }
    }
}

pub(crate) fn adjoint_residual_is_zero(a: &IntegerMatrix, lambda: &[BigInt], c: &[BigInt]) -> bool {
    a.transpose()
        .mul_vec(lambda)
        .is_ok_and(|atl| c.len() == atl.len() && atl.iter().zip(c).all(|(x, ci)| (x + ci).is_zero()))
}

/// Smith-form certificate for the torsion of `coker A`. Torsion-free means
/// `Ext^1(coker A, Z) = 0`: every rationally solvable `A x = b` has an
/// integer solution and the integer component has no duality gap.
pub fn torsion_certificate(a: &IntegerMatrix) -> IntegerCertificate {
    let snf = smith_normal_form(a);
    let offending_factors = snf.torsion_factors();
    IntegerCertificate {
        torsion_free: offending_factors.is_empty(),
        offending_factors,
        snf,
        adjoint_multiplier: None,
    }
}

/// Integer `λ` with `Aᵀλ = -c`, or `None` when no integer solution exists.
pub fn adjoint_solve(a: &IntegerMatrix, c: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let neg: Vec<BigInt> = c.iter().map(|x| -x).collect();
    Ok(solve_integer(&a.transpose(), &neg)?.map(|s| s.particular))
}
