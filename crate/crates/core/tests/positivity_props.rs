//! Positivity properties: the two-route equivalence of the block criterion
//! and the Gram oracle, classical consequences of positive definiteness, and
//! the GNS reconstruction.

mod common;

use common::*;
use num_complex::Complex64;
use pdfun_core::bundled::symmetric3;
use pdfun_core::group::ProductGroup;
use pdfun_core::harmonic::GroupFunction;
use pdfun_core::linalg::{numerical_rank, random_unit_vector};
use pdfun_core::positivity::{
    gns_construct, gram_matrix, haar_mean, invert_argument, is_positive_definite, pd_oracle_gram,
    restrict_to_diagonal,
};

fn s3xs3() -> ProductGroup {
    let d = symmetric3();
    ProductGroup::new(&d, &d).unwrap()
}

#[test]
fn block_criterion_agrees_with_gram_oracle() {
    // arbitrary, Hermitian-indefinite, and PD-by-construction inputs
    let d = symmetric3();
    let pg = s3xs3();
    for (data, count) in [(&d, 120), (&pg.data, 60)] {
        let mut r = rng(101);
        for i in 0..count {
            let f = match i % 3 {
                0 => random_function(data, &mut r),
                1 => random_hermitian_function(data, &mut r),
                _ => random_pd_function(data, &mut r),
            };
            let block = is_positive_definite(&f, data, 1e-8).unwrap();
            let gram = pd_oracle_gram(&f, &data.group, 1e-8).unwrap();
            assert_eq!(block.is_pd, gram.is_pd, "{} case {i}", data.id);
        }
    }
}

#[test]
fn pd_functions_satisfy_inverse_conjugation_and_stay_pd() {
    let d = symmetric3();
    let mut r = rng(103);
    for _ in 0..40 {
        let f = random_pd_function(&d, &mut r);
        let inv = invert_argument(&f, &d.group);
        for g in 0..6 {
            assert!((inv.values[g] - f.values[g].conj()).norm() < 1e-12);
        }
        assert!(is_positive_definite(&inv, &d, 1e-9).unwrap().is_pd);
    }
}

#[test]
fn pd_functions_peak_at_identity() {
    let d = s3xs3().data;
    let mut r = rng(107);
    for _ in 0..40 {
        let f = random_pd_function(&d, &mut r);
        let at_e = f.value_at_identity(&d).norm();
        let max = f.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max <= at_e + 1e-10);
        assert!(f.value_at_identity(&d).im.abs() < 1e-10);
    }
}

#[test]
fn haar_mean_of_pd_functions_is_nonnegative_real() {
    let d = symmetric3();
    let mut r = rng(109);
    for _ in 0..40 {
        let f = random_pd_function(&d, &mut r);
        let m = haar_mean(&f);
        assert!(m.re >= -1e-10);
        assert!(m.im.abs() < 1e-10);
    }
}

#[test]
fn gns_dimension_matches_gram_rank_with_tiny_error() {
    let d = symmetric3();
    let mut r = rng(113);
    for _ in 0..30 {
        let f = random_pd_function(&d, &mut r);
        let gns = gns_construct(&f, &d.group, 1e-9).unwrap();
        let rank = numerical_rank(&gram_matrix(&f, &d.group), 1e-9);
        assert_eq!(gns.dimension, rank);
        assert!(gns.reconstruction_error(&f) < 1e-10);
        // unitarity of the reconstructed representation
        for g in 0..6 {
            let pi = &gns.representation[g];
            let err = (pi * pi.adjoint()
                - pdfun_core::linalg::CMat::identity(gns.dimension, gns.dimension))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
            assert!(err < 1e-9);
        }
    }
}

#[test]
fn gns_of_pure_standard_function_recovers_the_standard_irrep() {
    let d = symmetric3();
    let mut r = rng(127);
    let v = random_unit_vector(&mut r, 2);
    let eps = GroupFunction::pure_from_vector(&d, 2, &v);
    let gns = gns_construct(&eps, &d.group, 1e-9).unwrap();
    assert_eq!(gns.dimension, 2);
    // characters identify the representation up to equivalence
    for g in 0..6 {
        let chi = d.table.irreps[2].character(g);
        assert!((gns.character(g) - chi).norm() < 1e-9, "g={g}");
    }
    assert!(gns.reconstruction_error(&eps) < 1e-10);
}

#[test]
fn gns_rejects_non_pd_input() {
    let d = symmetric3();
    let mut r = rng(131);
    let f = random_hermitian_function(&d, &mut r);
    if !is_positive_definite(&f, &d, 1e-9).unwrap().is_pd {
        assert!(gns_construct(&f, &d.group, 1e-9).is_err());
    }
}

#[test]
fn diagonal_restriction_preserves_pd() {
    let pg = s3xs3();
    let mut r = rng(137);
    for _ in 0..100 {
        let f = random_pd_function(&pg.data, &mut r);
        let diag = restrict_to_diagonal(&f, &pg).unwrap();
        let verdict = pd_oracle_gram(&diag, &pg.left.group, 1e-9).unwrap();
        assert!(verdict.is_pd);
    }
}

#[test]
fn diagonal_of_product_function_is_pointwise_product() {
    let d = symmetric3();
    let pg = s3xs3();
    let mut r = rng(139);
    let va = random_unit_vector(&mut r, 2);
    let vb = random_unit_vector(&mut r, 2);
    let eps = GroupFunction::pure_from_vector(&d, 2, &va);
    let eta = GroupFunction::pure_from_vector(&d, 2, &vb);
    let mut values = vec![Complex64::ZERO; 36];
    for g1 in 0..6 {
        for g2 in 0..6 {
            values[pg.pair_index(g1, g2)] = eps.values[g1] * eta.values[g2];
        }
    }
    let diag = restrict_to_diagonal(&GroupFunction::new(values), &pg).unwrap();
    for g in 0..6 {
        assert!((diag.values[g] - eps.values[g] * eta.values[g]).norm() < 1e-12);
    }
    assert!(pd_oracle_gram(&diag, &d.group, 1e-9).unwrap().is_pd);

    // constants restrict to constants
    let ones = GroupFunction::constant(36, Complex64::ONE);
    let diag = restrict_to_diagonal(&ones, &pg).unwrap();
    assert!(diag
        .values
        .iter()
        .all(|z| (z - Complex64::ONE).norm() < 1e-15));
}

#[test]
fn diagonal_restriction_requires_equal_factors() {
    let s3 = symmetric3();
    let z2 = pdfun_core::bundled::cyclic(2);
    let pg = ProductGroup::new(&s3, &z2).unwrap();
    let f = GroupFunction::constant(12, Complex64::ONE);
    assert!(restrict_to_diagonal(&f, &pg).is_err());
}

#[test]
fn bell_characteristic_function_is_pd_and_diagonal_restricts_pd() {
    let pg = s3xs3();
    let f = pdfun_core::detect::state_function(&pg, &pdfun_core::detect::bell_state()).unwrap();
    assert!(is_positive_definite(&f, &pg.data, 1e-9).unwrap().is_pd);
    let diag = restrict_to_diagonal(&f, &pg).unwrap();
    assert!(pd_oracle_gram(&diag, &pg.left.group, 1e-9).unwrap().is_pd);
}
