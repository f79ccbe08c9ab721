//! Two-phase tableau simplex with Bland's rule.
//!
//! Tableau rows are stored sparsely: LPs built from binomial cones and
//! per-coordinate bounds are mostly zeros, and pivots only touch rows with
//! a nonzero in the pivot column.

use num_traits::{One, Signed, Zero};

use super::{LinearProgram, LpOutcome, LpStatus, Rational};
use crate::Result;

#[derive(Clone, Debug, Default)]
struct SparseRow {
    idx: Vec<usize>,
    val: Vec<Rational>,
}

impl SparseRow {
    fn from_dense(dense: impl IntoIterator<Item = Rational>) -> Self {
        let mut row = Self::default();
        for (j, v) in dense.into_iter().enumerate() {
            if !v.is_zero() {
                row.idx.push(j);
                row.val.push(v);
            }
        }
        row
    }

    fn get(&self, j: usize) -> Option<&Rational> {
        self.idx.binary_search(&j).ok().map(|k| &self.val[k])
    }

    fn value(&self, j: usize) -> Rational {
        self.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    fn scale(&mut self, f: &Rational) {
        for v in &mut self.val {
            *v *= f;
        }
    }

    /// `self += f * other`
    fn axpy(&mut self, f: &Rational, other: &SparseRow) {
        let mut idx = Vec::with_capacity(self.idx.len() + other.idx.len());
        let mut val = Vec::with_capacity(idx.capacity());
        let (mut a, mut b) = (0, 0);
        let old_val = std::mem::take(&mut self.val);
        let mut old = old_val.into_iter();
        while a < self.idx.len() || b < other.idx.len() {
            let ja = self.idx.get(a).copied().unwrap_or(usize::MAX);
            let jb = other.idx.get(b).copied().unwrap_or(usize::MAX);
            if ja < jb {
                idx.push(ja);
                val.push(old.next().expect("value per index"));
                a += 1;
            } else if jb < ja {
                idx.push(jb);
                val.push(f * &other.val[b]);
                b += 1;
            } else {
                let v = old.next().expect("value per index") + f * &other.val[b];
                if !v.is_zero() {
                    idx.push(ja);
                    val.push(v);
                }
                a += 1;
                b += 1;
            }
        }
        self.idx = idx;
        self.val = val;
    }
}

struct Tableau {
    rows: Vec<SparseRow>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced-cost rows with their right-hand side (`-objective`).
    objectives: Vec<(SparseRow, Rational)>,
    /// Number of structural columns; artificials follow.
    structural: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / self.rows[r].get(c).expect("nonzero pivot");
        self.rows[r].scale(&inv);
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            if let Some(f) = self.rows[i].get(c).cloned() {
                let neg = -f;
                self.rows[i].axpy(&neg, &prow);
                self.rhs[i] += &neg * &prhs;
            }
        }
        for (row, value) in &mut self.objectives {
            if let Some(f) = row.get(c).cloned() {
                let neg = -f;
                row.axpy(&neg, &prow);
                *value += &neg * &prhs;
            }
        }
        self.basis[r] = c;
    }

    /// Bland: lowest-index structural column with negative reduced cost.
    fn entering(&self, objective: usize) -> Option<usize> {
        let (row, _) = &self.objectives[objective];
        row.idx
            .iter()
            .zip(&row.val)
            .find(|(&j, v)| j < self.structural && v.is_negative())
            .map(|(&j, _)| j)
    }

    /// Minimum ratio, ties broken by lowest basic variable index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let Some(a) = self.rows[i].get(c) else { continue };
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Runs simplex iterations on objective row `objective`; returns the
    /// unbounded column if one is found.
    fn optimise(&mut self, objective: usize) -> Option<usize> {
        while let Some(c) = self.entering(objective) {
            match self.leaving(c) {
                Some(r) => self.pivot(r, c),
                None => return Some(c),
            }
        }
        None
    }
}

/// Solves `p` exactly.
pub fn lp_solve(p: &LinearProgram) -> Result<LpOutcome> {
    p.check_dims()?;
    let (m, n) = (p.eq_matrix.rows(), p.num_vars());

    // Structural columns: x_j, plus -x_j for free variables.
    let mut columns: Vec<(usize, bool)> = Vec::with_capacity(2 * n);
    for j in 0..n {
        columns.push((j, false));
        if !p.nonneg.contains(&j) {
            columns.push((j, true));
        }
    }
    let structural = columns.len();

    let signs: Vec<bool> = p.eq_rhs.iter().map(|b| b.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = signs[i];
        let mut dense: Vec<Rational> = columns
            .iter()
            .map(|&(j, neg)| {
                let a = p.eq_matrix[(i, j)].clone();
                if neg ^ flip {
                    -a
                } else {
                    a
                }
            })
            .collect();
        dense.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        rows.push(SparseRow::from_dense(dense));
        rhs.push(if flip { -p.eq_rhs[i].clone() } else { p.eq_rhs[i].clone() });
    }

    // Phase 1 reduced costs: -sum of rows on structural columns.
    let mut phase1 = vec![Rational::zero(); structural + m];
    let mut phase1_rhs = Rational::zero();
    for (row, b) in rows.iter().zip(&rhs) {
        for (&j, v) in row.idx.iter().zip(&row.val) {
            if j < structural {
                phase1[j] -= v;
            }
        }
        phase1_rhs -= b;
    }
    let mut phase2 = vec![Rational::zero(); structural + m];
    for (k, &(j, neg)) in columns.iter().enumerate() {
        phase2[k] = if neg { -p.objective[j].clone() } else { p.objective[j].clone() };
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis: (structural..structural + m).collect(),
        objectives: vec![
            (SparseRow::from_dense(phase1), phase1_rhs),
            (SparseRow::from_dense(phase2), Rational::zero()),
        ],
        structural,
    };

    let unbounded = t.optimise(0);
    debug_assert!(unbounded.is_none(), "phase 1 is bounded below by zero");
    let unflip = |y: Vec<Rational>| -> Vec<Rational> {
        y.into_iter()
            .zip(&signs)
            .map(|(v, &s)| if s { -v } else { v })
            .collect()
    };

    let artificial_sum = -t.objectives[0].1.clone();
    if artificial_sum.is_positive() {
        // y1_k = 1 - d1(artificial k); certificate is -y1 in flipped rows.
        let cert = (0..m)
            .map(|k| t.objectives[0].0.value(structural + k) - Rational::one())
            .collect();
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            primal: None,
            dual: None,
            objective_value: None,
            infeasibility_certificate: Some(unflip(cert)),
            unbounded_ray: None,
        });
    }

    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= structural {
            let col = t.rows[r].idx.iter().copied().find(|&j| j < structural);
            if let Some(c) = col {
                t.pivot(r, c);
            }
        }
    }
    t.objectives.remove(0);

    let recover = |internal: &[Rational]| -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (k, &(j, neg)) in columns.iter().enumerate() {
            if neg {
                x[j] -= &internal[k];
            } else {
                x[j] += &internal[k];
            }
        }
        x
    };
    let basic_values = |t: &Tableau| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); structural];
        for (r, &b) in t.basis.iter().enumerate() {
            if b < structural {
                v[b] = t.rhs[r].clone();
            }
        }
        v
    };

    if let Some(c) = t.optimise(0) {
        let mut dir = vec![Rational::zero(); structural];
        dir[c] = Rational::one();
        for (r, &b) in t.basis.iter().enumerate() {
            if b < structural {
                dir[b] = -t.rows[r].value(c);
            }
        }
        let x = recover(&basic_values(&t));
        let ray = recover(&dir);
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            primal: Some(x),
            dual: None,
            objective_value: None,
            infeasibility_certificate: None,
            unbounded_ray: Some(ray),
        });
    }

    let x = recover(&basic_values(&t));
    let dual = (0..m)
        .map(|k| -t.objectives[0].0.value(structural + k))
        .collect();
    let value = super::dot(&p.objective, &x);
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        primal: Some(x),
        dual: Some(unflip(dual)),
        objective_value: Some(value),
        infeasibility_certificate: None,
        unbounded_ray: None,
    })
}
