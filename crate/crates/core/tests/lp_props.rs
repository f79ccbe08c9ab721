mod common;

use std::collections::BTreeSet;

use common::OracleLp;
use ethic_dual::lp::{
    dual_feasible, farkas_certificate, forced_zero_coordinates, lp_solve, primal_feasible,
    verify_farkas, LinearProgram, LpStatus, Rational, RationalMatrix,
};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let rows = (0..m)
        .map(|_| (0..n).map(|_| common::random_rational(rng, 9)).collect())
        .collect();
    LinearProgram::standard(
        (0..n).map(|_| common::random_rational(rng, 9)).collect(),
        RationalMatrix::from_rows(n, rows).unwrap(),
        (0..m).map(|_| common::random_rational(rng, 9)).collect(),
    )
}

#[test]
fn simplex_agrees_with_vertex_enumeration() {
    let mut rng = common::rng(41);
    let mut tally = [0usize; 3];
    for _ in 0..400 {
        let p = random_lp(&mut rng);
        let out = lp_solve(&p).unwrap();
        assert!(out.verify(&p));
        match common::vertex_oracle(&p.eq_matrix, &p.eq_rhs, &p.objective) {
            OracleLp::Infeasible => {
                tally[0] += 1;
                assert_eq!(out.status, LpStatus::Infeasible);
                let y = out.infeasibility_certificate.unwrap();
                assert!(verify_farkas(&p.eq_matrix, &p.eq_rhs, &p.nonneg, &y));
            }
            OracleLp::Unbounded => {
                tally[1] += 1;
                assert_eq!(out.status, LpStatus::Unbounded);
            }
            OracleLp::Optimal(v) => {
                tally[2] += 1;
                assert_eq!(out.status, LpStatus::Optimal);
                let x = out.primal.unwrap();
                let y = out.dual.unwrap();
                assert!(primal_feasible(&p, &x));
                assert!(dual_feasible(&p, &y));
                assert_eq!(out.objective_value.unwrap(), v);
                let dual_value: Rational = y.iter().zip(&p.eq_rhs).map(|(a, b)| a * b).sum();
                assert_eq!(dual_value, v);
            }
        }
    }
    assert!(tally.iter().all(|&t| t > 10), "unbalanced sample {tally:?}");
}

/// Highly degenerate instances: many zero right-hand sides and repeated rows.
#[test]
fn degenerate_instances_terminate() {
    let mut rng = common::rng(42);
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let base: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.gen_range(-2..=2).into())).collect();
        let mut rows = vec![base.clone(), base.clone()];
        rows.push((0..n).map(|_| Rational::from_integer(rng.gen_range(-1..=1).into())).collect());
        let p = LinearProgram::standard(
            (0..n).map(|_| Rational::from_integer(rng.gen_range(-3..=3).into())).collect(),
            RationalMatrix::from_rows(n, rows).unwrap(),
            vec![Rational::zero(); 3],
        );
        let out = lp_solve(&p).unwrap();
        assert!(out.verify(&p));
        assert_ne!(out.status, LpStatus::Infeasible);
    }
}

#[test]
fn forced_zero_matches_vertex_supports() {
    let mut rng = common::rng(43);
    for _ in 0..150 {
        let p = random_lp(&mut rng);
        let vertices = common::basic_feasible_points(&p.eq_matrix, &p.eq_rhs);
        match forced_zero_coordinates(&p.eq_matrix, &p.eq_rhs) {
            Err(e) => {
                assert!(vertices.is_empty(), "{e:?} {} {:?}", p.eq_matrix, p.eq_rhs);
                let y = farkas_certificate(&p.eq_matrix, &p.eq_rhs).unwrap();
                let all: BTreeSet<usize> = (0..p.num_vars()).collect();
                assert!(verify_farkas(&p.eq_matrix, &p.eq_rhs, &all, &y));
            }
            Ok(forced) => {
                assert!(!vertices.is_empty(), "{} {:?} {:?}", p.eq_matrix, p.eq_rhs, forced);
                // a coordinate is free iff some vertex or recession ray makes it positive;
                // forced coordinates vanish at every vertex
                for v in &vertices {
                    assert!(forced.iter().all(|&i| v[i].is_zero()));
                }
                for i in 0..p.num_vars() {
                    if vertices.iter().any(|v| v[i].is_positive()) {
                        assert!(!forced.contains(&i));
                    }
                }
            }
        }
    }
}
