//! Brute-force oracles shared by the integration and acceptance suites.
//! None of these call into the algorithm they are used to check.
#![allow(dead_code)]

use std::collections::HashMap;

use ethic_dual::graph::Graph;
use ethic_dual::linalg::IntegerMatrix;
use ethic_dual::lp::{Rational, RationalMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntegerMatrix {
    let data = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntegerMatrix::new(rows, cols, data).unwrap()
}

pub fn to_i64_rows(a: &IntegerMatrix) -> Vec<Vec<i64>> {
    a.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

/// Random connected simple graph: random spanning tree plus extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !edges.contains(&(u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Spanning trees by checking every (n-1)-subset of edges for acyclicity.
pub fn brute_force_spanning_trees(g: &Graph) -> u64 {
    let n = g.vertex_count();
    let edges = g.edges();
    assert!(edges.len() < 32, "edge subsets enumerated as a u32 mask");
    let mut count = 0;
    for mask in 0u32..(1u32 << edges.len()) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut comp: Vec<usize> = (0..n).collect();
        let mut acyclic = true;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let (cu, cv) = (comp[u], comp[v]);
            if cu == cv {
                acyclic = false;
                break;
            }
            comp.iter_mut().filter(|c| **c == cu).for_each(|c| *c = cv);
        }
        count += u64::from(acyclic);
    }
    count
}

fn neighbours(g: &Graph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Greedy borrowing: a vertex in debt borrows from its neighbours; if every
/// vertex has borrowed and debt remains, no effective divisor is equivalent.
pub fn greedy_effective(g: &Graph, d: &[i64]) -> bool {
    let adj = neighbours(g);
    let n = d.len();
    let mut d = d.to_vec();
    let mut borrowed = vec![false; n];
    loop {
        let Some(v) = (0..n).find(|&v| d[v] < 0) else {
            return true;
        };
        if borrowed.iter().all(|&b| b) {
            return false;
        }
        borrowed[v] = true;
        d[v] += adj[v].len() as i64;
        for &w in &adj[v] {
            d[w] -= 1;
        }
    }
}

/// `r(D) = -1` if not effective-equivalent, else `min_v r(D - v) + 1`.
pub fn rank_oracle(g: &Graph, d: &[i64]) -> i64 {
    fn go(g: &Graph, d: &[i64], memo: &mut HashMap<Vec<i64>, i64>) -> i64 {
        if let Some(&r) = memo.get(d) {
            return r;
        }
        let r = if !greedy_effective(g, d) {
            -1
        } else {
            let mut best = i64::MAX;
            for v in 0..d.len() {
                let mut e = d.to_vec();
                e[v] -= 1;
                best = best.min(go(g, &e, memo) + 1);
                if best == 0 {
                    break;
                }
            }
            best
        };
        memo.insert(d.to_vec(), r);
        r
    }
    go(g, d, &mut HashMap::new())
}

/// Nonnegative integer feasibility of `A x = b` for `A >= 0`, by dynamic
/// programming over the box `[0, b]`.
pub fn coin_change_feasible(a: &[Vec<u64>], b: &[u64]) -> bool {
    let m = b.len();
    let size: usize = b.iter().map(|&x| x as usize + 1).product();
    let index = |v: &[u64]| {
        v.iter()
            .zip(b)
            .fold(0usize, |acc, (&x, &bi)| acc * (bi as usize + 1) + x as usize)
    };
    let cols = a[0].len();
    let mut reach = vec![false; size];
    reach[0] = true;
    // enumerate points in lexicographic order; every step adds a column
    let mut point = vec![0u64; m];
    for idx in 0..size {
        let mut rem = idx;
        for i in (0..m).rev() {
            point[i] = (rem % (b[i] as usize + 1)) as u64;
            rem /= b[i] as usize + 1;
        }
        if !reach[idx] {
            continue;
        }
        for j in 0..cols {
            if (0..m).all(|i| a[i][j] == 0) {
                continue;
            }
            let next: Vec<u64> = (0..m).map(|i| point[i] + a[i][j]).collect();
            if next.iter().zip(b).all(|(x, bi)| x <= bi) {
                reach[index(&next)] = true;
            }
        }
    }
    reach[size - 1]
}

/// Exact rank over Q of an integer matrix (fraction-free elimination).
pub fn rank_i128(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let (f, g) = (m[rank][c].clone(), m[i][c].clone());
                for k in 0..cols {
                    m[i][k] = &m[i][k] * &f - &m[rank][k] * &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// gcd of all k×k minors.
pub fn minor_gcd(rows: &[Vec<i128>], k: usize) -> BigInt {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(m, k) {
        for cs in subsets(n, k) {
            let sub = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| BigInt::from(rows[i][j])).collect())
                .collect();
            g = g.gcd(&det_big(sub));
        }
    }
    g
}

/// Integer solvability of `A x = b`: ranks of `A` and `[A | b]` agree and
/// so does the gcd of their maximal nonvanishing minors.
pub fn integer_solvable_oracle(a: &[Vec<i128>], b: &[i128]) -> bool {
    let aug: Vec<Vec<i128>> = a
        .iter()
        .zip(b)
        .map(|(r, &x)| r.iter().copied().chain([x]).collect())
        .collect();
    let r = rank_i128(a);
    if rank_i128(&aug) != r {
        return false;
    }
    r == 0 || minor_gcd(a, r) == minor_gcd(&aug, r)
}

pub fn rational_solvable_oracle(a: &[Vec<i128>], b: &[i128]) -> bool {
    let aug: Vec<Vec<i128>> = a
        .iter()
        .zip(b)
        .map(|(r, &x)| r.iter().copied().chain([x]).collect())
        .collect();
    rank_i128(a) == rank_i128(&aug)
}

/// Gauss-Jordan solve of a square nonsingular system, or None.
fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for k in c..=n {
            m[c][k] = &m[c][k] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=n {
                    let t = &m[c][k] * &f;
                    m[i][k] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Basic solutions of `{x >= 0 : A x = b}`: choose an independent row set
/// `R` and column set `S` of equal size with `A_{R,S}` nonsingular; keep the
/// solutions that satisfy all rows and are nonnegative.
pub fn basic_feasible_points(a: &RationalMatrix, b: &[Rational]) -> Vec<Vec<Rational>> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::new();
    if b.iter().all(Zero::is_zero) {
        out.push(vec![Rational::zero(); n]);
    }
    for k in 1..=m.min(n) {
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let sub: Vec<Vec<Rational>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect())
                    .collect();
                let rhs: Vec<Rational> = rs.iter().map(|&i| b[i].clone()).collect();
                let Some(xs) = solve_square(&sub, &rhs) else {
                    continue;
                };
                if xs.iter().any(Signed::is_negative) {
                    continue;
                }
                let mut x = vec![Rational::zero(); n];
                for (&j, v) in cs.iter().zip(xs) {
                    x[j] = v;
                }
                if a.mul_vec(&x).unwrap() == b {
                    out.push(x);
                }
            }
        }
    }
    out
}

#[derive(Debug)]
pub enum OracleLp {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// `min cᵀx` over `{x >= 0 : A x = b}` by vertex and extreme-ray enumeration.
pub fn vertex_oracle(a: &RationalMatrix, b: &[Rational], c: &[Rational]) -> OracleLp {
    let value = |x: &[Rational]| -> Rational { x.iter().zip(c).map(|(x, c)| x * c).sum() };
    let vertices = basic_feasible_points(a, b);
    if vertices.is_empty() {
        return OracleLp::Infeasible;
    }
    // extreme rays: basic points of {d >= 0 : A d = 0, 1ᵀd = 1}
    let n = a.cols();
    let mut rows = a.to_rows();
    rows.push(vec![Rational::one(); n]);
    let homog = RationalMatrix::from_rows(n, rows).unwrap();
    let mut rhs = vec![Rational::zero(); a.rows()];
    rhs.push(Rational::one());
    if basic_feasible_points(&homog, &rhs)
        .iter()
        .any(|d| value(d).is_negative())
    {
        return OracleLp::Unbounded;
    }
    OracleLp::Optimal(vertices.iter().map(|x| value(x)).min().unwrap())
}

pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::new(
        BigInt::from(rng.gen_range(-bound..=bound)),
        BigInt::from(rng.gen_range(1..=bound)),
    )
}
