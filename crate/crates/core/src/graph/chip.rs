//! Chip-firing reduction to the unique `q`-reduced representative of a
//! divisor class.
//!
//! Reduction runs in two stages. The off-`q` part of the divisor is first
//! brought into the box `0 <= D(v) < h_v` by subtracting rows of the Hermite
//! form of the reduced Laplacian `L_q`; every such row is a principal
//! divisor, so the class is unchanged. Dhar's burning test then repeatedly
//! fires the unburnt set until everything burns.

use num_traits::ToPrimitive;

use super::{laplacian, Divisor, Graph};
use crate::linalg::{hermite_normal_form, IntegerMatrix};
use crate::{Error, Result};

/// How many times an unburnt set is fired per burning round. Both choices
/// reach the same reduced divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FiringStrategy {
    /// Fire the unburnt set as many times as stays legal.
    #[default]
    Maximal,
    /// Fire the unburnt set once, then burn again.
    Single,
}

/// Precomputed data for reductions relative to a fixed base vertex.
#[derive(Clone, Debug)]
pub struct ChipFiring {
    q: usize,
    adjacency: Vec<Vec<(usize, i64)>>,
    /// Off-`q` vertices in order, matching the rows of `hermite`.
    others: Vec<usize>,
    /// Upper-triangular Hermite basis of the lattice spanned by `L_q`.
    hermite: Vec<Vec<i64>>,
}

impl ChipFiring {
    pub fn new(g: &Graph, q: usize) -> Result<Self> {
        let n = g.vertex_count();
        if q >= n {
            return Err(Error::VertexOutOfRange {
                vertex: q,
                vertex_count: n,
            });
        }
        g.require_connected()?;
        let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
        let lq: IntegerMatrix = laplacian(g).select(&others, &others);
        // L_q is symmetric, so its row lattice is its column lattice.
        let (h, _) = hermite_normal_form(&lq);
        let hermite = h
            .to_rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| x.to_i64().ok_or(Error::Overflow(x)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            q,
            adjacency: g.adjacency(),
            others,
            hermite,
        })
    }

    pub fn base_vertex(&self) -> usize {
        self.q
    }

    pub fn reduce(&self, d: &Divisor, strategy: FiringStrategy) -> Result<Divisor> {
        if d.len() != self.adjacency.len() {
            return Err(Error::DimensionMismatch(format!(
                "divisor of length {} on a graph with {} vertices",
                d.len(),
                self.adjacency.len()
            )));
        }
        let mut values = self.box_reduce(d)?;
        self.burn_and_fire(&mut values, strategy)?;
        Ok(Divisor::new(values))
    }

    /// Whether `d` is linearly equivalent to an effective divisor.
    pub fn is_equivalent_to_effective(&self, d: &Divisor) -> Result<bool> {
        Ok(self.reduce(d, FiringStrategy::Maximal)?.values[self.q] >= 0)
    }

    fn box_reduce(&self, d: &Divisor) -> Result<Vec<i64>> {
        let degree: i128 = d.values.iter().map(|&x| x as i128).sum();
        let mut r: Vec<i128> = self.others.iter().map(|&v| d.values[v] as i128).collect();
        for (i, row) in self.hermite.iter().enumerate() {
            let pivot = row[i] as i128;
            let k = r[i].div_euclid(pivot);
            if k != 0 {
                for (x, &h) in r.iter_mut().zip(row).skip(i) {
                    *x -= k * h as i128;
                }
            }
        }
        let mut out = vec![0i64; self.adjacency.len()];
        let mut rest = degree;
        for (&v, x) in self.others.iter().zip(r) {
            rest -= x;
            out[v] = narrow(x)?;
        }
        out[self.q] = narrow(rest)?;
        Ok(out)
    }

    /// Dhar's burning algorithm; expects nonnegative off-`q` entries.
    fn burn_and_fire(&self, d: &mut [i64], strategy: FiringStrategy) -> Result<()> {
        let n = d.len();
        loop {
            let (burnt, into_burnt) = self.burn(d);
            if burnt.iter().all(|&b| b) {
                return Ok(());
            }
            let times = match strategy {
                FiringStrategy::Single => 1,
                FiringStrategy::Maximal => (0..n)
                    .filter(|&v| !burnt[v] && into_burnt[v] > 0)
                    .map(|v| d[v] / into_burnt[v])
                    .min()
                    .expect("an unburnt set of a connected graph has boundary edges"),
            };
            debug_assert!(times >= 1);
            for v in (0..n).filter(|&v| !burnt[v]) {
                for &(w, mult) in &self.adjacency[v] {
                    if burnt[w] {
                        let moved = times.checked_mul(mult).ok_or(Error::Defect(
                            "chip count overflow during firing".into(),
                        ))?;
                        d[v] -= moved;
                        d[w] += moved;
                    }
                }
            }
        }
    }

    /// Returns the burnt set and, for every vertex, the number of edges it
    /// has into the burnt set.
    fn burn(&self, d: &[i64]) -> (Vec<bool>, Vec<i64>) {
        let n = d.len();
        let mut burnt = vec![false; n];
        let mut into_burnt = vec![0i64; n];
        let mut stack = vec![self.q];
        burnt[self.q] = true;
        while let Some(u) = stack.pop() {
            for &(w, mult) in &self.adjacency[u] {
                if burnt[w] {
                    continue;
                }
                into_burnt[w] += mult;
                if into_burnt[w] > d[w] {
                    burnt[w] = true;
                    stack.push(w);
                }
            }
        }
        // recount against the final burnt set
        for v in 0..n {
            into_burnt[v] = if burnt[v] {
                0
            } else {
                self.adjacency[v]
                    .iter()
                    .filter(|(w, _)| burnt[*w])
                    .map(|(_, m)| m)
                    .sum()
            };
        }
        (burnt, into_burnt)
    }

    /// True iff `d` is `q`-reduced: nonnegative off `q` and fully burnable.
    pub fn is_reduced(&self, d: &Divisor) -> bool {
        d.len() == self.adjacency.len()
            && (0..d.len()).all(|v| v == self.q || d.values[v] >= 0)
            && self.burn(&d.values).0.iter().all(|&b| b)
    }
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(x.into()))
}

/// The unique `q`-reduced divisor linearly equivalent to `d`.
pub fn dhar_reduce(g: &Graph, d: &Divisor, q: usize) -> Result<Divisor> {
    dhar_reduce_with(g, d, q, FiringStrategy::default())
}

pub fn dhar_reduce_with(
    g: &Graph,
    d: &Divisor,
    q: usize,
    strategy: FiringStrategy,
) -> Result<Divisor> {
    d.check_len(g)?;
    ChipFiring::new(g, q)?.reduce(d, strategy)
}

pub fn is_q_reduced(g: &Graph, d: &Divisor, q: usize) -> Result<bool> {
    d.check_len(g)?;
    Ok(ChipFiring::new(g, q)?.is_reduced(d))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::solve_integer;

    fn div(xs: &[i64]) -> Divisor {
        Divisor::new(xs.to_vec())
    }

    fn equivalent(g: &Graph, a: &Divisor, b: &Divisor) -> bool {
        solve_integer(&laplacian(g), &(a - b).to_bigints())
            .unwrap()
            .is_some()
    }

    #[test]
    fn c3_fires_overfull_vertex() {
        let c3 = Graph::cycle(3);
        let r = dhar_reduce(&c3, &div(&[0, 2, 0]), 0).unwrap();
        assert_eq!(r, div(&[1, 0, 1]));
        assert!(is_q_reduced(&c3, &r, 0).unwrap());
        assert!(equivalent(&c3, &r, &div(&[0, 2, 0])));
    }

    #[test]
    fn reduced_input_is_fixed() {
        let c3 = Graph::cycle(3);
        assert_eq!(dhar_reduce(&c3, &div(&[3, 0, 0]), 0).unwrap(), div(&[3, 0, 0]));
        assert_eq!(dhar_reduce(&c3, &div(&[-2, 1, 0]), 0).unwrap(), div(&[-2, 1, 0]));
    }

    #[test]
    fn negative_entries_are_lifted() {
        let k4 = Graph::complete(4);
        let d = div(&[0, -3, 5, -1]);
        for q in 0..4 {
            let r = dhar_reduce(&k4, &d, q).unwrap();
            assert!(is_q_reduced(&k4, &r, q).unwrap());
            assert!(equivalent(&k4, &r, &d));
            assert_eq!(r.degree(), d.degree());
        }
    }

    #[test]
    fn strategies_agree() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3), (1, 3)])
            .unwrap();
        for d in [div(&[7, 0, 9, -4, 2]), div(&[0, 0, 0, 0, 11]), div(&[-5, 3, 3, 3, 3])] {
            let a = dhar_reduce_with(&g, &d, 2, FiringStrategy::Maximal).unwrap();
            let b = dhar_reduce_with(&g, &d, 2, FiringStrategy::Single).unwrap();
            assert_eq!(a, b);
            assert_eq!(dhar_reduce(&g, &a, 2).unwrap(), a);
        }
    }

    #[test]
    fn errors() {
        let h = Graph::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(dhar_reduce(&h, &div(&[0, 0, 0]), 0), Err(Error::Disconnected));
        let c3 = Graph::cycle(3);
        assert!(matches!(dhar_reduce(&c3, &div(&[0, 0]), 0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(
            dhar_reduce(&c3, &div(&[0, 0, 0]), 3),
            Err(Error::VertexOutOfRange { .. })
        ));
    }
}
