//! Finitely generated abelian groups and the derived dual `RHom(-, Z)` of a
//! two-term integer complex.
//!
//! Over `Z`, `Hom(M, Z)` sees only the free part of `M` and `Ext^1(M, Z)` is
//! isomorphic to the torsion of `M`; higher `Ext` vanish. Everything below is
//! read off a Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{kernel_basis, smith_normal_form, IntegerMatrix};
use crate::{Error, Result};

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` in invariant-factor form: every
/// `d_i >= 2` and `d_i | d_{i+1}`. Equality is equality of this canonical
/// form, which is isomorphism of groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Validates an already canonical invariant-factor list.
    pub fn new(free_rank: usize, torsion_factors: Vec<BigInt>) -> Result<Self> {
        let two = BigInt::from(2);
        if torsion_factors.iter().any(|d| *d < two) {
            return Err(Error::DimensionMismatch(
                "torsion factors must be at least 2".into(),
            ));
        }
        if !torsion_factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])) {
            return Err(Error::DimensionMismatch(
                "torsion factors must form a divisibility chain".into(),
            ));
        }
        Ok(Self {
            free_rank,
            torsion_factors,
        })
    }

    /// Canonicalises `Z^free_rank ⊕ Z/n_1 ⊕ ...` for arbitrary cyclic orders.
    /// An order of zero contributes a free summand; orders of ±1 vanish.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let extra_free = orders.iter().filter(|n| n.is_zero()).count();
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|n| !n.is_zero())
            .map(|n| n.abs())
            .collect();
        let snf = smith_normal_form(&IntegerMatrix::diagonal(&finite));
        Self {
            free_rank: free_rank + extra_free,
            torsion_factors: snf.torsion_factors(),
        }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion_factors: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_factors(&self) -> &[BigInt] {
        &self.torsion_factors
    }

    /// Order of the torsion subgroup (1 when torsion-free).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_factors.is_empty()
    }

    pub fn torsion_part(&self) -> Self {
        Self {
            free_rank: 0,
            torsion_factors: self.torsion_factors.clone(),
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `coker(A : Z^cols -> Z^rows)`.
pub fn cokernel(a: &IntegerMatrix) -> FgAbelianGroup {
    let snf = smith_normal_form(a);
    FgAbelianGroup {
        free_rank: a.rows() - snf.rank(),
        torsion_factors: snf.torsion_factors(),
    }
}

/// `Ext^1_Z(G, Z) ≅ tors(G)`.
pub fn ext1_to_z(g: &FgAbelianGroup) -> FgAbelianGroup {
    g.torsion_part()
}

/// `Hom_Z(G, Z) ≅ Z^{free rank}`.
pub fn hom_to_z(g: &FgAbelianGroup) -> FgAbelianGroup {
    FgAbelianGroup::free(g.free_rank)
}

/// `C_1 --d--> C_0` concentrated in two adjacent degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    pub d: IntegerMatrix,
    /// Names of `(C_1, C_0)`.
    pub labels: (String, String),
}

impl TwoTermComplex {
    pub fn new(d: IntegerMatrix) -> Self {
        Self {
            d,
            labels: ("C1".into(), "C0".into()),
        }
    }

    pub fn with_labels(d: IntegerMatrix, source: &str, target: &str) -> Self {
        Self {
            d,
            labels: (source.into(), target.into()),
        }
    }

    /// Accepts a list of differentials; anything other than exactly one is
    /// rejected.
    pub fn from_differentials(mut ds: Vec<IntegerMatrix>) -> Result<Self> {
        match ds.len() {
            1 => Ok(Self::new(ds.pop().expect("length checked"))),
            n => Err(Error::ComplexTooLong(n + 1)),
        }
    }
}

/// Cohomology of `RHom(cx, Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedDualReport {
    /// Rank of the lattice of functionals on `C_0` vanishing on `im d`.
    pub h0_rank: usize,
    /// Torsion of `coker d`; always finite.
    pub h1: FgAbelianGroup,
    /// `rank Hom(C_0, Z) - rank Hom(im d, Z)`.
    pub euler_characteristic: i64,
}

pub fn derived_dual(cx: &TwoTermComplex) -> DerivedDualReport {
    let snf = smith_normal_form(&cx.d);
    let rank = snf.rank();
    let c0 = cx.d.rows();
    let h0_rank = c0 - rank;
    DerivedDualReport {
        h0_rank,
        h1: FgAbelianGroup {
            free_rank: 0,
            torsion_factors: snf.torsion_factors(),
        },
        euler_characteristic: c0 as i64 - rank as i64,
    }
}

/// Explicit basis (as columns) of the integer functionals on `C_0` that
/// vanish on `im d`.
pub fn h0_basis(cx: &TwoTermComplex) -> IntegerMatrix {
    kernel_basis(&cx.d.transpose())
}
