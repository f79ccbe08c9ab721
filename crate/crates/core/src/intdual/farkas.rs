//! Discrete Farkas lemma: `A x = b` has a solution `x ∈ N^n` iff
//! `z^b - 1` lies in the cone generated by the shifted binomials
//! `z^α (z^{A_j} - 1)`.
//!
//! Membership is decided in a finite truncation: shifts range over a finite
//! set of exponents `α` (by default the box `0 <= α <= b`), and the cone
//! lives in the span of the monomials those generators touch. The LP
//! variables are the nonnegative generator coefficients; coefficient
//! comparison on each monomial is one equality row. A feasible
//! representation is a unit flow from `0` to `b` along the column steps,
//! so following positive coefficients from `0` recovers an integer witness.
//! An infeasible one comes with an exact Farkas functional on the monomial
//! space.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::IntegerMatrix;
use crate::lp::{farkas_certificate, lp_solve, LinearProgram, LpStatus, Rational, RationalMatrix};
use crate::{Error, Result};

pub const DEFAULT_SHIFT_CAP: u128 = 1_000_000;
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 10_000_000;

type Exponent = Vec<usize>;

/// Which shifts `α` generate the truncated cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShiftLattice {
    /// Every `α` with `0 <= α <= b` componentwise.
    #[default]
    Box,
    /// Only box points reachable from `0` by adding columns of `A`.
    Reachable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FarkasConfig {
    pub shift_cap: u128,
    pub lattice: ShiftLattice,
}

impl Default for FarkasConfig {
    fn default() -> Self {
        Self {
            shift_cap: DEFAULT_SHIFT_CAP,
            lattice: ShiftLattice::Box,
        }
    }
}

/// A linear functional on the truncated monomial space, listed by its
/// nonzero values `Φ(z^β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub values: Vec<(Exponent, Rational)>,
}

impl Separator {
    pub fn at(&self, beta: &[usize]) -> Rational {
        self.values
            .iter()
            .find(|(e, _)| e.as_slice() == beta)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `Φ(z^{hi} - z^{lo})`
    pub fn binomial(&self, hi: &[usize], lo: &[usize]) -> Rational {
        self.at(hi) - self.at(lo)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasOutcome {
    pub feasible: bool,
    pub witness: Option<Vec<BigInt>>,
    pub separator: Option<Separator>,
}

impl FarkasOutcome {
    /// Substitution check: a witness must satisfy `A x = b, x >= 0`; a
    /// separator must be nonnegative on every generator of the truncated
    /// cone and negative on `z^b - 1`.
    pub fn verify(&self, a: &IntegerMatrix, b: &[BigInt], config: &FarkasConfig) -> Result<bool> {
        if self.feasible {
            let Some(x) = &self.witness else {
                return Ok(false);
            };
            return Ok(x.iter().all(|v| !v.is_negative()) && a.mul_vec(x)? == b);
        }
        let Some(phi) = &self.separator else {
            return Ok(false);
        };
        let (columns, target) = validate(a, b)?;
        let shifts = farkas_shift_lattice_with(a, b, config)?;
        let zero = vec![0; target.len()];
        let generators_ok = shifts.iter().all(|alpha| {
            columns.iter().all(|col| {
                let hi: Exponent = alpha.iter().zip(col).map(|(x, y)| x + y).collect();
                !phi.binomial(&hi, alpha).is_negative()
            })
        });
        Ok(generators_ok && phi.binomial(&target, &zero).is_negative())
    }
}

fn to_usize(x: &BigInt) -> Result<usize> {
    x.to_usize().ok_or_else(|| Error::Overflow(x.clone()))
}

/// Checks nonnegativity and shapes; returns the nonzero columns and `b`.
fn validate(a: &IntegerMatrix, b: &[BigInt]) -> Result<(Vec<Exponent>, Exponent)> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows against a right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    if a.entries().iter().any(Signed::is_negative) {
        return Err(Error::NegativeEntry("constraint matrix"));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::NegativeEntry("right-hand side"));
    }
    let target = b.iter().map(to_usize).collect::<Result<Vec<_>>>()?;
    let columns = (0..a.cols())
        .map(|j| a.col(j).iter().map(to_usize).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|c| c.iter().any(|&x| x > 0))
        .collect();
    Ok((columns, target))
}

fn box_size(b: &[usize]) -> u128 {
    b.iter()
        .try_fold(1u128, |acc, &x| acc.checked_mul(x as u128 + 1))
        .unwrap_or(u128::MAX)
}

/// Shift exponents `0 <= α <= b` (the default truncation), capped at
/// [`DEFAULT_SHIFT_CAP`] points.
pub fn farkas_shift_lattice(a: &IntegerMatrix, b: &[BigInt]) -> Result<Vec<Exponent>> {
    farkas_shift_lattice_with(a, b, &FarkasConfig::default())
}

pub fn farkas_shift_lattice_with(
    a: &IntegerMatrix,
    b: &[BigInt],
    config: &FarkasConfig,
) -> Result<Vec<Exponent>> {
    let (columns, target) = validate(a, b)?;
    let size = box_size(&target);
    if size > config.shift_cap {
        return Err(Error::CapExceeded {
            what: "shift lattice size",
            needed: size,
            cap: config.shift_cap,
        });
    }
    let mut all = vec![Vec::new()];
    for &bi in &target {
        all = all
            .into_iter()
            .flat_map(|prefix: Exponent| {
                (0..=bi).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    match config.lattice {
        ShiftLattice::Box => Ok(all),
        ShiftLattice::Reachable => {
            let mut reached = std::collections::HashSet::from([vec![0; target.len()]]);
            // box points sorted lexicographically: predecessors come first
            for alpha in &all {
                if !reached.contains(alpha) {
                    continue;
                }
                for col in &columns {
                    let next: Exponent = alpha.iter().zip(col).map(|(x, y)| x + y).collect();
                    if next.iter().zip(&target).all(|(x, t)| x <= t) {
                        reached.insert(next);
                    }
                }
            }
            Ok(all.into_iter().filter(|a| reached.contains(a)).collect())
        }
    }
}

pub fn discrete_farkas(a: &IntegerMatrix, b: &[BigInt]) -> Result<FarkasOutcome> {
    discrete_farkas_with(a, b, &FarkasConfig::default())
}

pub fn discrete_farkas_with(
    a: &IntegerMatrix,
    b: &[BigInt],
    config: &FarkasConfig,
) -> Result<FarkasOutcome> {
    let (columns, target) = validate(a, b)?;
    let zero = vec![0; target.len()];
    if target == zero {
        return Ok(FarkasOutcome {
            feasible: true,
            witness: Some(vec![BigInt::zero(); a.cols()]),
            separator: None,
        });
    }
    let shifts = farkas_shift_lattice_with(a, b, config)?;

    // Monomial rows, in order of first appearance.
    let mut monomials: Vec<Exponent> = Vec::new();
    let mut row_of: HashMap<Exponent, usize> = HashMap::new();
    let mut intern = |e: Exponent, monomials: &mut Vec<Exponent>| -> usize {
        *row_of.entry(e.clone()).or_insert_with(|| {
            monomials.push(e);
            monomials.len() - 1
        })
    };
    let target_row = intern(target.clone(), &mut monomials);
    let origin_row = intern(zero.clone(), &mut monomials);
    // generator k = (shift index, column index)
    let mut generators: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (s, alpha) in shifts.iter().enumerate() {
        for (c, col) in columns.iter().enumerate() {
            let hi: Exponent = alpha.iter().zip(col).map(|(x, y)| x + y).collect();
            let lo_row = intern(alpha.clone(), &mut monomials);
            let hi_row = intern(hi, &mut monomials);
            generators.push((s, c, lo_row, hi_row));
        }
    }

    let mut m = RationalMatrix::zeros(monomials.len(), generators.len());
    for (k, &(_, _, lo, hi)) in generators.iter().enumerate() {
        m[(hi, k)] += Rational::from_integer(1.into());
        m[(lo, k)] -= Rational::from_integer(1.into());
    }
    let mut rhs = vec![Rational::zero(); monomials.len()];
    rhs[target_row] += Rational::from_integer(1.into());
    rhs[origin_row] -= Rational::from_integer(1.into());

    let lp = LinearProgram::standard(vec![Rational::zero(); generators.len()], m.clone(), rhs.clone());
    let out = lp_solve(&lp)?;
    match out.status {
        LpStatus::Optimal => {
            let mu = out.primal.expect("optimal outcome carries a primal point");
            let witness = match walk_flow(&shifts, &columns, &generators, &mu, &target) {
                Some(x) => x,
                None => {
                    let oracle = brute_force_feasibility(a, b)?;
                    return Err(Error::Defect(format!(
                        "cone representation found but witness reconstruction failed; \
                         brute-force oracle reports {oracle:?}"
                    )));
                }
            };
            // map back from nonzero-column indices to all columns
            let nonzero: Vec<usize> = (0..a.cols())
                .filter(|&j| a.col(j).iter().any(|x| !x.is_zero()))
                .collect();
            let mut x = vec![BigInt::zero(); a.cols()];
            for (c, count) in witness.into_iter().enumerate() {
                x[nonzero[c]] = BigInt::from(count);
            }
            if a.mul_vec(&x)? != b {
                return Err(Error::Defect("reconstructed witness fails A x = b".into()));
            }
            Ok(FarkasOutcome {
                feasible: true,
                witness: Some(x),
                separator: None,
            })
        }
        _ => {
            let y = match out.infeasibility_certificate {
                Some(y) => y,
                None => farkas_certificate(&m, &rhs)?,
            };
            let mut values: Vec<(Exponent, Rational)> = monomials
                .into_iter()
                .zip(y)
                .filter(|(_, v)| !v.is_zero())
                .collect();
            values.sort();
            Ok(FarkasOutcome {
                feasible: false,
                witness: None,
                separator: Some(Separator { values }),
            })
        }
    }
}

/// Follows positive generator coefficients from `0` to `b`, counting steps
/// per column.
fn walk_flow(
    shifts: &[Exponent],
    columns: &[Exponent],
    generators: &[(usize, usize, usize, usize)],
    mu: &[Rational],
    target: &[usize],
) -> Option<Vec<u64>> {
    let mut out_edges: HashMap<&Exponent, Vec<usize>> = HashMap::new();
    for (k, &(s, c, _, _)) in generators.iter().enumerate() {
        if mu[k].is_positive() {
            out_edges.entry(&shifts[s]).or_default().push(c);
        }
    }
    let mut counts = vec![0u64; columns.len()];
    let mut cur: Exponent = vec![0; target.len()];
    let max_steps: usize = target.iter().sum();
    for _ in 0..max_steps {
        if cur == target {
            break;
        }
        let &c = out_edges.get(&cur)?.first()?;
        counts[c] += 1;
        for (x, y) in cur.iter_mut().zip(&columns[c]) {
            *x += y;
        }
    }
    (cur == target).then_some(counts)
}

/// Exhaustive search for `x ∈ N^n` with `A x = b`, returning the
/// lexicographically least solution.
pub fn brute_force_feasibility(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    brute_force_feasibility_with_cap(a, b, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_feasibility_with_cap(
    a: &IntegerMatrix,
    b: &[BigInt],
    cap: u128,
) -> Result<Option<Vec<BigInt>>> {
    validate(a, b)?;
    let target = b.iter().map(to_usize).collect::<Result<Vec<_>>>()?;
    let cols: Vec<Exponent> = (0..a.cols())
        .map(|j| a.col(j).iter().map(to_usize).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    // x_j <= min over rows with A_ij > 0 of b_i / A_ij; zero columns fixed at 0
    let bounds: Vec<usize> = cols
        .iter()
        .map(|c| {
            c.iter()
                .zip(&target)
                .filter(|(&aij, _)| aij > 0)
                .map(|(&aij, &bi)| bi / aij)
                .min()
                .unwrap_or(0)
        })
        .collect();
    let size = box_size(&bounds);
    if size > cap {
        return Err(Error::CapExceeded {
            what: "brute-force search box",
            needed: size,
            cap,
        });
    }
    fn search(
        j: usize,
        cols: &[Exponent],
        bounds: &[usize],
        residual: &mut Vec<usize>,
        x: &mut Vec<usize>,
    ) -> bool {
        if j == cols.len() {
            return residual.iter().all(|&r| r == 0);
        }
        for v in 0..=bounds[j] {
            if cols[j].iter().zip(residual.iter()).any(|(&a, &r)| a * v > r) {
                break;
            }
            for (r, &a) in residual.iter_mut().zip(&cols[j]) {
                *r -= a * v;
            }
            x[j] = v;
            let found = search(j + 1, cols, bounds, residual, x);
            for (r, &a) in residual.iter_mut().zip(&cols[j]) {
                *r += a * v;
            }
            if found {
                return true;
            }
        }
        false
    }
    let mut residual = target;
    let mut x = vec![0; cols.len()];
    Ok(search(0, &cols, &bounds, &mut residual, &mut x)
        .then(|| x.into_iter().map(BigInt::from).collect()))
}
