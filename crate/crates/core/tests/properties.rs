mod common;

use common::*;
use mvop_core::bispec::{
    algebra_search, construct_operator, eigen_from_op, verify_bispectral, RightDiffOp, SearchConfig,
};
use mvop_core::blockop::{ad_bracket_power, darboux_factorize, darboux_transform, intertwine_check};
use mvop_core::exact::{int, rat, MatrixR, Rational};
use mvop_core::mop::{inner_product, polys_from_moments, polys_from_recurrence, recurrence_from_moments};
use mvop_core::weights::{gegenbauer02_operator, moments, wtilde_weight, Normalization, Weight};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn matrix2() -> impl Strategy<Value = MatrixR> {
    proptest::collection::vec(small(), 4).prop_map(|v| MatrixR::new(2, 2, v).unwrap())
}

fn symmetric2() -> impl Strategy<Value = MatrixR> {
    (small(), small(), small()).prop_map(|(a, b, c)| m2([[a, b.clone()], [b, c]]))
}

/// `u u^T + c I` with `c >= 0`.
fn psd2() -> impl Strategy<Value = MatrixR> {
    (small(), small(), 0i64..=3).prop_map(|(a, b, c)| {
        m2([[&a * &a + int(c), &a * &b], [&a * &b, &b * &b + int(c)]])
    })
}

fn half_integer_lambda() -> impl Strategy<Value = Rational> {
    (2i64..=4).prop_map(|m| rat(2 * m + 1, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn darboux_roundtrip_and_intertwining(lambda in half_integer_lambda(), a0 in matrix2()) {
        let l0 = gegenbauer02_operator(&lambda, 8).unwrap();
        let Ok(f) = darboux_factorize(&l0, &a0) else { return Ok(()); };
        let l = darboux_transform(&f).unwrap();
        let (alpha, beta) = (f.alpha_matrix(), f.beta_matrix());
        prop_assert!(alpha.mul(&beta).unwrap().sub(&l0.to_banded()).unwrap().is_zero_in_window());
        prop_assert!(beta.mul(&alpha).unwrap().sub(&l.to_banded()).unwrap().is_zero_in_window());
        prop_assert!(intertwine_check(&beta, &l0, &l).unwrap().pass);
    }

    #[test]
    fn transformed_family_orthogonal(lambda in half_integer_lambda(), a0 in symmetric2()) {
        prop_assume!(a0.inverse().is_ok());
        let l0 = gegenbauer02_operator(&lambda, 7).unwrap();
        let Ok(f) = darboux_factorize(&l0, &a0) else { return Ok(()); };
        let l = darboux_transform(&f).unwrap();
        let w = wtilde_weight(lambda, &a0, -1).unwrap();
        let mu = moments(&w, 12, Normalization::Absolute).unwrap();
        let fam = polys_from_recurrence(&l, 6).unwrap();
        for j in 0..6 {
            for k in 0..j {
                prop_assert!(inner_product(fam.get(j), fam.get(k), &mu).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn path_independence_with_masses(v in psd2(), w in psd2(), a in 0i64..=2, b in 0i64..=2) {
        let mut wt = Weight::jacobi(int(a), int(b), 2).unwrap();
        wt = wt.with_delta(int(1), w).unwrap().with_delta(int(-1), v).unwrap();
        let mu = moments(&wt, 13, Normalization::Absolute).unwrap();
        let direct = polys_from_moments(&mu, 6).unwrap();
        let l = recurrence_from_moments(&mu, 6).unwrap();
        let via = polys_from_recurrence(&l, 6).unwrap();
        for k in 0..6 {
            prop_assert_eq!(direct.get(k), via.get(k));
        }
    }

    #[test]
    fn eigenvalues_round_trip_in_example1_algebra(a in small(), b in small()) {
        let l = example1_l(12);
        let d = example1_operator().scale(&a).add(&RightDiffOp::identity(2).scale(&b)).unwrap();
        let lam = eigen_from_op(&l, &d, 12).unwrap();
        prop_assert!(verify_bispectral(&l, &d, &lam, 12).unwrap().pass);
        prop_assert_eq!(lam.at(0).unwrap(), d.coeff(0).coeff(0));
        let rebuilt = construct_operator(&l, &lam, 4).unwrap();
        prop_assert_eq!(&rebuilt, &d);
        let ad = ad_bracket_power(&l, &lam.values(12).unwrap(), 5).unwrap();
        prop_assert!(ad.is_zero_in_window());
    }
}

#[test]
fn constant_term_is_first_eigenvalue() {
    let l = example2_l(SearchConfig::new(6).levels_needed());
    let r = algebra_search(&l, SearchConfig::new(6)).unwrap();
    for d in &r.basis {
        let lam = eigen_from_op(&l, d, 4).unwrap();
        assert_eq!(d.coeff(0).coeff(0), lam.at(0).unwrap());
    }
}

#[test]
fn dimensions_nonincreasing_in_training_length() {
    let l = example1_l(24);
    let mut previous: Option<Vec<usize>> = None;
    for n_train in 4..12 {
        let r = algebra_search(&l, SearchConfig { max_order: 4, n_train, n_verify: 3 }).unwrap();
        if let Some(p) = &previous {
            assert!(r.dims_trained.iter().zip(p).all(|(a, b)| a <= b), "{n_train}: {:?} vs {p:?}", r.dims_trained);
        }
        previous = Some(r.dims_trained);
    }
}

#[test]
fn search_basis_verifies_beyond_training() {
    let l = jacobi_l(0, 0, 1, Some(&MatrixR::scalar(1, int(1))), Some(&MatrixR::scalar(1, int(1))), 20);
    let r = algebra_search(&l, SearchConfig::new(4)).unwrap();
    for d in &r.basis {
        let lam = eigen_from_op(&l, d, 20).unwrap();
        assert!(verify_bispectral(&l, d, &lam, 20).unwrap().pass);
    }
}
