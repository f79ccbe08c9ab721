//! Ethic memory of a chain of integer morphisms.
//!
//! Step `t` maps `Z^{cols_t} -> Z^{rows_t}` and the chain composes as
//! `F_t = S_t ⋯ S_1`. The memory at time `t` is the torsion of
//! `coker F_t`, and its entropy is `ln |tors coker F_t|`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::homology::{cokernel, FgAbelianGroup};
use crate::linalg::IntegerMatrix;
use crate::{par, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismChain {
    steps: Vec<IntegerMatrix>,
}

impl MorphismChain {
    /// Requires a nonempty list with `cols(S_{t+1}) = rows(S_t)`.
    pub fn new(steps: Vec<IntegerMatrix>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Empty("morphism chain"));
        }
        for (t, pair) in steps.windows(2).enumerate() {
            if pair[1].cols() != pair[0].rows() {
                return Err(Error::DimensionMismatch(format!(
                    "step {} has {} columns but step {} has {} rows",
                    t + 2,
                    pair[1].cols(),
                    t + 1,
                    pair[0].rows()
                )));
            }
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[IntegerMatrix] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self` followed by `next`.
    pub fn concat(&self, next: &Self) -> Result<Self> {
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Self::new(steps)
    }

    /// `F_t` for `1 <= t <= len`.
    pub fn composition(&self, t: usize) -> Result<IntegerMatrix> {
        if t == 0 || t > self.len() {
            return Err(Error::IndexOutOfRange {
                index: t,
                len: self.len(),
            });
        }
        let mut f = self.steps[0].clone();
        for s in &self.steps[1..t] {
            f = s.checked_mul(&f)?;
        }
        Ok(f)
    }

    /// `[F_1, …, F_len]`.
    pub fn prefix_products(&self) -> Vec<IntegerMatrix> {
        let mut out: Vec<IntegerMatrix> = Vec::with_capacity(self.len());
        for s in &self.steps {
            let next = match out.last() {
                Some(f) => s.checked_mul(f).expect("composability checked at construction"),
                None => s.clone(),
            };
            out.push(next);
        }
        out
    }
}

/// Natural log of an exact torsion order. The order is authoritative; `nats`
/// is for display.
#[derive(Clone, Debug, PartialEq)]
pub struct Entropy {
    pub order: BigInt,
    pub nats: f64,
}

impl Entropy {
    pub fn of_order(order: BigInt) -> Self {
        let nats = ln_big(&order);
        Self { order, nats }
    }
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ln {} = {:.6}", self.order, self.nats)
    }
}

/// `ln n` for `n >= 1`, from the top 64 bits so it never overflows `f64`.
fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemoryPoint {
    pub t: usize,
    pub memory: FgAbelianGroup,
    pub torsion_order: BigInt,
    pub entropy: Entropy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemoryReport {
    pub per_time: Vec<MemoryPoint>,
}

fn memory_of(f: &IntegerMatrix) -> FgAbelianGroup {
    cokernel(f).torsion_part()
}

/// `tors coker F_t`.
pub fn ethic_memory(chain: &MorphismChain, t: usize) -> Result<FgAbelianGroup> {
    Ok(memory_of(&chain.composition(t)?))
}

pub fn ethic_entropy_profile(chain: &MorphismChain) -> MemoryReport {
    let prefixes = chain.prefix_products();
    let per_time = par::map(&prefixes, memory_of)
        .into_iter()
        .enumerate()
        .map(|(i, memory)| {
            let order = memory.torsion_order();
            MemoryPoint {
                t: i + 1,
                entropy: Entropy::of_order(order.clone()),
                torsion_order: order,
                memory,
            }
        })
        .collect();
    MemoryReport { per_time }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibilityReport {
    pub reversible: bool,
    pub memory: FgAbelianGroup,
}

/// Reversible exactly when `coker F` has no torsion.
pub fn reversibility_check(f: &IntegerMatrix) -> Result<ReversibilityReport> {
    if !f.is_square() {
        return Err(Error::NotSquare {
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    let memory = memory_of(f);
    Ok(ReversibilityReport {
        reversible: memory.is_trivial(),
        memory,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubadditivityReport {
    pub s1: Entropy,
    pub s2: Entropy,
    pub s_concat: Entropy,
    /// `|M(g2∘g1)| <= |M(g1)| · |M(g2)|`, compared exactly.
    pub subadditive: bool,
}

pub fn subadditivity_report(g1: &MorphismChain, g2: &MorphismChain) -> Result<SubadditivityReport> {
    let joined = g1.concat(g2)?;
    let orders = par::map(&[g1, g2, &joined], |c| {
        memory_of(&c.composition(c.len()).expect("nonempty chain")).torsion_order()
    });
    let [o1, o2, o12]: [BigInt; 3] = orders.try_into().expect("three orders");
    Ok(SubadditivityReport {
        subadditive: o12 <= &o1 * &o2,
        s1: Entropy::of_order(o1),
        s2: Entropy::of_order(o2),
        s_concat: Entropy::of_order(o12),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayPoint {
    pub t: usize,
    pub entropy: Entropy,
    /// True at `t = 1`; afterwards compares exact orders with `t - 1`.
    pub nonincreasing_from_previous: bool,
}

/// Annotates the entropy profile with monotone decay. Violations are data.
pub fn decay_report(chain: &MorphismChain) -> Vec<DecayPoint> {
    let mut prev: Option<BigInt> = None;
    ethic_entropy_profile(chain)
        .per_time
        .into_iter()
        .map(|p| {
            let ok = prev.as_ref().is_none_or(|o| p.torsion_order <= *o);
            prev = Some(p.torsion_order.clone());
            DecayPoint {
                t: p.t,
                entropy: p.entropy,
                nonincreasing_from_previous: ok,
            }
        })
        .collect()
}

/// Sum of `ln d_i` over invariant factors `d_i > 1`; equals `ln` of the order.
pub fn entropy_from_factors(factors: &[BigInt]) -> f64 {
    factors
        .iter()
        .filter(|d| !d.is_one())
        .map(ln_big)
        .sum()
}
