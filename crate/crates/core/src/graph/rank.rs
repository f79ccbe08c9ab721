use super::chip::ChipFiring;
use super::{canonical_divisor, Divisor, Graph};
use crate::{par, Error, Result};

/// Largest effective-divisor degree the rank search will enumerate.
pub const DEFAULT_DEGREE_CAP: usize = 32;

/// Baker-Norine rank `r(D)`, or `-1` when `D` is not equivalent to an
/// effective divisor.
pub fn baker_norine_rank(g: &Graph, d: &Divisor) -> Result<i64> {
    baker_norine_rank_with_cap(g, d, DEFAULT_DEGREE_CAP)
}

/// Rank search that enumerates every effective `E` of degree `k = 1, 2, ...`
/// and tests `D - E` for effectivity by reduction, stopping at the first
/// failing `k`. Fails with [`Error::CapExceeded`] instead of enumerating
/// beyond `degree_cap`.
pub fn baker_norine_rank_with_cap(g: &Graph, d: &Divisor, degree_cap: usize) -> Result<i64> {
    Ok(rank_certificate(g, d, degree_cap)?.rank)
}

/// `r(D)` together with the effective `E` of degree `r + 1` for which
/// `D - E` is not equivalent to an effective divisor (`E = 0` when `r = -1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: i64,
    pub witness: Divisor,
}

impl RankCertificate {
    /// Checks the upper bound `r(D) <= rank` by substitution: `E` is
    /// effective of degree `rank + 1` and `D - E` reduces to a divisor that
    /// is negative at the base vertex. The lower bound needs the search.
    pub fn verify_upper_bound(&self, g: &Graph, d: &Divisor) -> Result<bool> {
        d.check_len(g)?;
        self.witness.check_len(g)?;
        if !self.witness.is_effective() || self.witness.degree() != self.rank + 1 {
            return Ok(false);
        }
        let rest = d - &self.witness;
        Ok(!ChipFiring::new(g, 0)?.is_equivalent_to_effective(&rest)?)
    }
}

pub fn rank_certificate(g: &Graph, d: &Divisor, degree_cap: usize) -> Result<RankCertificate> {
    d.check_len(g)?;
    let chips = ChipFiring::new(g, 0)?;
    rank_in(&chips, d, degree_cap)
}

pub(crate) fn rank_in(chips: &ChipFiring, d: &Divisor, degree_cap: usize) -> Result<RankCertificate> {
    let n = d.len();
    if d.degree() < 0 || !chips.is_equivalent_to_effective(d)? {
        return Ok(RankCertificate {
            rank: -1,
            witness: Divisor::zero(n),
        });
    }
    let mut k: usize = 1;
    loop {
        // r(D) <= deg(D): any E of larger degree leaves negative degree
        if k as i64 > d.degree() {
            let mut values = vec![0; n];
            values[0] = k as i64;
            return Ok(RankCertificate {
                rank: k as i64 - 1,
                witness: Divisor::new(values),
            });
        }
        if k > degree_cap {
            return Err(Error::CapExceeded {
                what: "rank search degree",
                needed: k as u128,
                cap: degree_cap as u128,
            });
        }
        let level = effective_divisors(n, k);
        let survives = |e: &Vec<i64>| -> Result<bool> {
            let rest = Divisor::new(d.values.iter().zip(e).map(|(a, b)| a - b).collect());
            chips.is_equivalent_to_effective(&rest)
        };
        if !par::all(&level, |e| survives(e).unwrap_or(false)) {
            // sequential pass picks the first witness and surfaces errors
            for e in &level {
                if !survives(e)? {
                    return Ok(RankCertificate {
                        rank: k as i64 - 1,
                        witness: Divisor::new(e.clone()),
                    });
                }
            }
            return Err(Error::Defect("parallel and sequential rank passes disagree".into()));
        }
        k += 1;
    }
}

/// All effective divisors of degree `k` on `n` vertices, in lexicographic
/// order.
pub(crate) fn effective_divisors(n: usize, k: usize) -> Vec<Vec<i64>> {
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(i + 1, left - x, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(0, k as i64, &mut vec![0; n], &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannRochReport {
    pub rank: i64,
    pub rank_of_complement: i64,
    pub degree: i64,
    pub genus: i64,
    /// `r(D) - r(K - D)`
    pub lhs: i64,
    /// `deg D + 1 - g`
    pub rhs: i64,
    pub holds: bool,
}

/// Evaluates both sides of `r(D) - r(K - D) = deg D + 1 - g`.
pub fn riemann_roch_check(g: &Graph, d: &Divisor) -> Result<RiemannRochReport> {
    riemann_roch_check_with_cap(g, d, DEFAULT_DEGREE_CAP)
}

pub fn riemann_roch_check_with_cap(g: &Graph, d: &Divisor, degree_cap: usize) -> Result<RiemannRochReport> {
    d.check_len(g)?;
    let chips = ChipFiring::new(g, 0)?;
    let complement = &canonical_divisor(g) - d;
    let (rank, rank_of_complement) = par::join(
        || rank_in(&chips, d, degree_cap),
        || rank_in(&chips, &complement, degree_cap),
    );
    let (rank, rank_of_complement) = (rank?.rank, rank_of_complement?.rank);
    let genus = g.genus();
    let lhs = rank - rank_of_complement;
    let rhs = d.degree() + 1 - genus;
    Ok(RiemannRochReport {
        rank,
        rank_of_complement,
        degree: d.degree(),
        genus,
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}
