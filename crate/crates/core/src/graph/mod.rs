//! Graph-side duality: the boundary complex `C_1 -> C_0`, the Laplacian
//! `L = ∂∂ᵀ`, sandpile groups, chip-firing and Baker-Norine rank.

mod chip;
mod kirchhoff;
mod rank;

pub use chip::{dhar_reduce, dhar_reduce_with, is_q_reduced, ChipFiring, FiringStrategy};
pub use kirchhoff::{jacobian, reduced_laplacian_determinant, spanning_tree_count};
pub use rank::{
    baker_norine_rank, baker_norine_rank_with_cap, rank_certificate, riemann_roch_check,
    riemann_roch_check_with_cap, RankCertificate, RiemannRochReport, DEFAULT_DEGREE_CAP,
};

use std::str::FromStr;

use num_bigint::BigInt;

use crate::homology::TwoTermComplex;
use crate::linalg::IntegerMatrix;
use crate::{Error, Result};

/// Loopless multigraph with a fixed orientation per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, edges).expect("complete graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least three vertices");
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, edges).expect("cycle is valid")
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, edges).expect("path is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = self.vertex_count;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Cyclomatic number `|E| - |V| + 1` (the genus of a connected graph).
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count as i64 + 1
    }

    /// Same graph with every edge reversed.
    pub fn reversed(&self) -> Self {
        Self {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }

    /// `(neighbour, multiplicity)` lists.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let n = self.vertex_count;
        let mut mult = vec![vec![0i64; n]; n];
        for &(u, v) in &self.edges {
            mult[u][v] += 1;
            mult[v][u] += 1;
        }
        mult.into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|&(_, m)| m > 0)
                    .collect()
            })
            .collect()
    }
}

/// Graph text format: a header `n m`, then `m` lines `u v` with 0-indexed
/// vertices. `#` comment lines and blank lines are ignored.
impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing `n m` header".into(),
        })?;
        let [n, m] = parse_pair(hl, header)?;
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let [u, v] = parse_pair(ln, line)?;
            if u == v {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("loop at vertex {u} is not allowed"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, edges)
    }
}

fn parse_pair(line_no: usize, line: &str) -> Result<[usize; 2]> {
    let xs = crate::linalg::parse_ints::<usize>(line_no, line)?;
    <[usize; 2]>::try_from(xs).map_err(|_| Error::Parse {
        line: line_no,
        message: format!("expected two integers, got {line:?}"),
    })
}

/// Integer vertex weighting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor {
    pub values: Vec<i64>,
}

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Self { values }
    }

    pub fn zero(n: usize) -> Self {
        Self { values: vec![0; n] }
    }

    pub fn degree(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.values.iter().all(|&x| x >= 0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.values.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Errors unless there is one value per vertex of `g`.
    pub fn check_len(&self, g: &Graph) -> Result<()> {
        if self.values.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "divisor of length {} on a graph with {} vertices",
                self.values.len(),
                g.vertex_count()
            )))
        }
    }
}

impl std::ops::Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect())
    }
}

/// Divisor text format: whitespace-separated integers, `#` comments allowed.
impl FromStr for Divisor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            values.extend(crate::linalg::parse_ints::<i64>(i + 1, line)?);
        }
        Ok(Self { values })
    }
}

/// `|V| x |E|` boundary matrix: the column of edge `(u, v)` is `e_v - e_u`.
pub fn boundary_matrix(g: &Graph) -> IntegerMatrix {
    let mut d = IntegerMatrix::zeros(g.vertex_count, g.edges.len());
    for (j, &(u, v)) in g.edges.iter().enumerate() {
        d[(u, j)] -= 1;
        d[(v, j)] += 1;
    }
    d
}

/// `L = ∂ ∂ᵀ`.
pub fn laplacian(g: &Graph) -> IntegerMatrix {
    let d = boundary_matrix(g);
    d.checked_mul(&d.transpose()).expect("shapes agree")
}

/// `K(v) = deg(v) - 2`.
pub fn canonical_divisor(g: &Graph) -> Divisor {
    Divisor::new(
        (0..g.vertex_count)
            .map(|v| g.degree(v) as i64 - 2)
            .collect(),
    )
}

/// The divisor complex `C_1 --L--> C_0` presenting `Prin(G) ⊂ Div(G)`.
pub fn divisor_complex(g: &Graph) -> TwoTermComplex {
    TwoTermComplex::with_labels(laplacian(g), "Div", "Div")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::derived_dual;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    fn k3() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(boundary_matrix(&single), m(&[&[-1], &[1]]));
        assert_eq!(
            boundary_matrix(&k3()),
            m(&[&[-1, 0, -1], &[1, -1, 0], &[0, 1, 1]])
        );
        let d = boundary_matrix(&Graph::complete(5));
        for j in 0..d.cols() {
            assert_eq!(d.col(j).iter().sum::<BigInt>(), BigInt::from(0));
        }
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(
            laplacian(&k3()),
            m(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]])
        );
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(laplacian(&single), m(&[&[1, -1], &[-1, 1]]));
        let l = laplacian(&Graph::new(3, vec![(0, 1), (1, 0), (1, 2)]).unwrap());
        assert_eq!(l, m(&[&[2, -2, 0], &[-2, 3, -1], &[0, -1, 1]]));
        for i in 0..l.rows() {
            assert_eq!(l.row(i).iter().sum::<BigInt>(), BigInt::from(0));
        }
    }

    #[test]
    fn laplacian_ignores_orientation() {
        let g = Graph::new(4, vec![(0, 1), (2, 1), (3, 0), (2, 3), (1, 3)]).unwrap();
        assert_eq!(laplacian(&g), laplacian(&g.reversed()));
    }

    #[test]
    fn canonical_divisor_examples() {
        let c3 = Graph::cycle(3);
        assert_eq!(canonical_divisor(&c3).values, vec![0, 0, 0]);
        assert_eq!(canonical_divisor(&c3).degree(), 2 * c3.genus() - 2);
        let k4 = Graph::complete(4);
        assert_eq!(canonical_divisor(&k4).values, vec![1, 1, 1, 1]);
        assert_eq!(k4.genus(), 3);
        let p3 = Graph::path(3);
        assert_eq!(canonical_divisor(&p3).values, vec![-1, 0, -1]);
        assert_eq!(canonical_divisor(&p3).degree(), -2);
    }

    #[test]
    fn loops_and_bad_vertices_rejected() {
        assert!(matches!(Graph::new(2, vec![(1, 1)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(
            Graph::new(2, vec![(0, 2)]),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!("2 1\n1 1\n".parse::<Graph>(), Err(Error::Parse { .. })));
        assert!(Graph::new(0, vec![]).is_err());
    }

    #[test]
    fn graph_text_format() {
        let g: Graph = "# triangle\n3 3\n0 1\n1 2\n0 2\n".parse().unwrap();
        assert_eq!(g, k3());
        assert!("3 2\n0 1\n".parse::<Graph>().is_err());
        let d: Divisor = "1 -2\n 3".parse().unwrap();
        assert_eq!(d.values, vec![1, -2, 3]);
    }

    #[test]
    fn connectivity() {
        assert!(k3().is_connected());
        assert!(Graph::new(1, vec![]).unwrap().is_connected());
        assert!(!Graph::new(3, vec![(0, 1)]).unwrap().is_connected());
    }

    #[test]
    fn euler_characteristic_of_divisor_complex() {
        for g in [k3(), Graph::complete(5), Graph::path(4), Graph::cycle(6)] {
            assert_eq!(derived_dual(&divisor_complex(&g)).euler_characteristic, 1);
        }
    }
}
