mod common;

use ethic_dual::linalg::{
    determinantal_divisors, hermite_normal_form, kernel_basis, smith_normal_form, solve_integer,
    IntegerMatrix,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntegerMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn invariant_factors_are_divisor_quotients(a in matrix(6, 9)) {
        let snf = smith_normal_form(&a);
        let dd = determinantal_divisors(&a).unwrap();
        for (k, d) in snf.invariant_factors.iter().enumerate() {
            let prev = if k == 0 { BigInt::one() } else { dd[k - 1].clone() };
            prop_assert_eq!(d * &prev, dd[k].clone());
        }
        prop_assert!(dd.iter().skip(snf.invariant_factors.len()).all(Zero::is_zero));
    }

    #[test]
    fn decomposition_is_exact_and_unimodular(a in matrix(6, 9)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.checked_mul(&a).unwrap().checked_mul(&snf.v).unwrap(), snf.s.clone());
        prop_assert_eq!(snf.u.determinant().unwrap().abs(), BigInt::one());
        prop_assert_eq!(snf.v.determinant().unwrap().abs(), BigInt::one());
        prop_assert!(snf.s.is_diagonal());
        prop_assert!(snf.verify(&a));
        for w in snf.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn hermite_form_is_row_equivalent(a in matrix(5, 9)) {
        let (h, u) = hermite_normal_form(&a);
        prop_assert_eq!(u.checked_mul(&a).unwrap(), h);
        prop_assert_eq!(u.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn solve_round_trip(
        (a, x) in matrix(5, 9).prop_flat_map(|a| {
            let n = a.cols();
            (Just(a), proptest::collection::vec(-20i64..=20, n))
        })
    ) {
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        let b = a.mul_vec(&x).unwrap();
        let sol = solve_integer(&a, &b).unwrap().expect("A·x is in the image");
        prop_assert_eq!(a.mul_vec(&sol.particular).unwrap(), b);
        for j in 0..sol.kernel.cols() {
            prop_assert!(a.mul_vec(&sol.kernel.col(j)).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinant_matches_snf(a in (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| {
            IntegerMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })) {
        let snf = smith_normal_form(&a);
        let prod: BigInt = if snf.rank() == a.rows() {
            snf.invariant_factors.iter().product()
        } else {
            BigInt::zero()
        };
        prop_assert_eq!(a.determinant().unwrap().abs(), prod);
    }
}

/// Adding any small kernel vector to the basis does not raise lattice rank,
/// and the basis spans it over Z (the kernel lattice is saturated).
#[test]
fn kernel_basis_is_saturated() {
    let mut rng = common::rng(11);
    for _ in 0..40 {
        let a = common::random_matrix(&mut rng, 2, 3, 3);
        let k = kernel_basis(&a);
        for j in 0..k.cols() {
            assert!(a.mul_vec(&k.col(j)).unwrap().iter().all(Zero::is_zero));
        }
        assert_eq!(k.cols(), a.cols() - a.rank());
        for x0 in -5i64..=5 {
            for x1 in -5i64..=5 {
                for x2 in -5i64..=5 {
                    let v: Vec<BigInt> = [x0, x1, x2].into_iter().map(BigInt::from).collect();
                    if !a.mul_vec(&v).unwrap().iter().all(Zero::is_zero) {
                        continue;
                    }
                    let mut cols: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.col(j)).collect();
                    cols.push(v.clone());
                    let aug = IntegerMatrix::from_columns(3, &cols).unwrap();
                    assert_eq!(aug.rank(), k.cols());
                    assert!(solve_integer(&k, &v).unwrap().is_some(), "{v:?} not in Z-span");
                }
            }
        }
    }
}
