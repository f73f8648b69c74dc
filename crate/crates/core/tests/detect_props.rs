//! Detection properties: PPT soundness on certified separable samples,
//! detector soundness for the bundled library, exactness at low block
//! dimensions, and the bound-entanglement labelling rule.

mod common;

use common::*;
use num_complex::Complex64;
use pdfun_core::bundled::{alternating4, symmetric3};
use pdfun_core::detect::{
    bell_state, check_ppt, check_separability, make_separable_sample, partial_transpose_spectrum,
    state_function, SepMethod, SepVerdict,
};
use pdfun_core::group::ProductGroup;
use pdfun_core::harmonic::{characteristic_function, GroupFunction};
use pdfun_core::linalg::{ginibre_state, random_unit_vector, CMat};
use pdfun_core::positivity::is_positive_definite;

fn s3xs3() -> ProductGroup {
    let d = symmetric3();
    ProductGroup::new(&d, &d).unwrap()
}

#[test]
fn separable_samples_never_violate_ppt() {
    let pg = s3xs3();
    for seed in 0..1000 {
        let f = make_separable_sample(&pg, 1 + (seed as usize % 5), seed);
        let violations = check_ppt(&f, &pg, 1e-8).unwrap();
        assert!(violations.is_empty(), "seed {seed}: {:?}", violations[0]);
    }
}

#[test]
fn two_qubit_verdicts_match_the_direct_ppt_oracle() {
    let pg = s3xs3();
    let block = pg.block_of(2, 2).unwrap();
    let mut r = rng(301);
    for i in 0..100 {
        let rho = ginibre_state(&mut r, 4);
        let oracle_min = partial_transpose_spectrum(&rho, 2, 2)[0];
        let phi = characteristic_function(&pg, block, &rho, true).unwrap();
        let report = check_separability(&phi, &pg, 1e-9).unwrap();
        let expected = if oracle_min < -1e-9 {
            SepVerdict::Entangled
        } else {
            SepVerdict::Separable
        };
        assert_eq!(report.verdict, expected, "case {i}");
        if report.verdict == SepVerdict::Entangled {
            let b = report
                .per_block
                .iter()
                .find(|b| b.verdict == SepVerdict::Entangled)
                .unwrap();
            assert_eq!(b.method, SepMethod::PptExact);
            assert!((b.min_pt_eigenvalue.unwrap() - oracle_min).abs() < 1e-9);
        }
    }
}

#[test]
fn two_times_three_blocks_get_exact_ppt_verdicts() {
    let s3 = symmetric3();
    let a4 = alternating4();
    let pg = ProductGroup::new(&s3, &a4).unwrap();
    let alpha = s3.table.index_of("std").unwrap();
    let beta = a4.table.index_of("std").unwrap();
    let block = pg.block_of(alpha, beta).unwrap();
    let mut r = rng(307);
    let mut seen_entangled = false;
    let mut seen_separable = false;
    for i in 0..60 {
        // plain Ginibre draws at 2⊗3 are almost surely NPT; depolarize every
        // other draw so both verdicts occur
        let mut rho = ginibre_state(&mut r, 6);
        if i % 2 == 1 {
            rho = rho.scale(0.2) + CMat::identity(6, 6).scale(0.8 / 6.0);
        }
        let oracle_min = partial_transpose_spectrum(&rho, 2, 3)[0];
        let phi = characteristic_function(&pg, block, &rho, true).unwrap();
        let report = check_separability(&phi, &pg, 1e-9).unwrap();
        let b = report
            .per_block
            .iter()
            .find(|b| b.block == "std,std")
            .unwrap();
        assert_eq!(b.factor_dims, (2, 3));
        assert_eq!(b.method, SepMethod::PptExact);
        let expected = if oracle_min < -1e-9 {
            SepVerdict::Entangled
        } else {
            SepVerdict::Separable
        };
        assert_eq!(report.verdict, expected);
        seen_entangled |= expected == SepVerdict::Entangled;
        seen_separable |= expected == SepVerdict::Separable;
    }
    // the Ginibre ensemble on 2⊗3 produces both outcomes
    assert!(seen_entangled && seen_separable);
}

/// Convex mixture of pure product functions pinned to the two std irreps.
fn separable_std_std_function(
    pg: &ProductGroup,
    k: usize,
    r: &mut rand_chacha::ChaCha8Rng,
) -> GroupFunction {
    let alpha = pg.left.table.index_of("std").unwrap();
    let beta = pg.right.table.index_of("std").unwrap();
    let mut values = vec![Complex64::ZERO; pg.order()];
    for _ in 0..k {
        let va = random_unit_vector(r, pg.left.table.irreps[alpha].dim);
        let vb = random_unit_vector(r, pg.right.table.irreps[beta].dim);
        let eps = GroupFunction::pure_from_vector(&pg.left, alpha, &va);
        let eta = GroupFunction::pure_from_vector(&pg.right, beta, &vb);
        for g1 in 0..pg.left.order() {
            for g2 in 0..pg.right.order() {
                values[pg.pair_index(g1, g2)] +=
                    eps.values[g1] * eta.values[g2] / Complex64::new(k as f64, 0.0);
            }
        }
    }
    GroupFunction::new(values)
}

#[test]
fn undecided_3x3_blocks_are_labelled_bound_entangled_candidates() {
    let a4 = alternating4();
    let pg = ProductGroup::new(&a4, &a4).unwrap();
    let mut r = rng(311);

    // separable on the (std,std) 3⊗3 block: PPT passes, block stays
    // undecided, so the candidate label must appear
    let f = separable_std_std_function(&pg, 6, &mut r);
    let report = check_separability(&f, &pg, 1e-9).unwrap();
    assert_eq!(report.verdict, SepVerdict::PptUndecided);
    let b = report
        .per_block
        .iter()
        .find(|b| b.block == "std,std")
        .unwrap();
    assert_eq!(b.factor_dims, (3, 3));
    assert_eq!(b.verdict, SepVerdict::PptUndecided);
    assert_eq!(b.method, SepMethod::PptNecessary);
    assert!(report.bound_entangled_candidate);

    // a maximally entangled 3⊗3 state is NPT: entangled, no candidate label
    let mut psi = CMat::zeros(9, 1);
    for i in 0..3 {
        psi[(i * 3 + i, 0)] = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    }
    let rho = &psi * psi.adjoint();
    let block = pg
        .block_of(
            a4.table.index_of("std").unwrap(),
            a4.table.index_of("std").unwrap(),
        )
        .unwrap();
    let phi = characteristic_function(&pg, block, &rho, true).unwrap();
    let report = check_separability(&phi, &pg, 1e-9).unwrap();
    assert_eq!(report.verdict, SepVerdict::Entangled);
    assert!(!report.bound_entangled_candidate);
    let b = report
        .per_block
        .iter()
        .find(|b| b.block == "std,std")
        .unwrap();
    assert!((b.min_pt_eigenvalue.unwrap() + 1.0 / 3.0).abs() < 1e-9);

    // on 2⊗2 there is no such label: verdicts there are exact
    let pg2 = s3xs3();
    let f2 = state_function(&pg2, &pdfun_core::detect::werner_state(0.2)).unwrap();
    let report = check_separability(&f2, &pg2, 1e-9).unwrap();
    assert_eq!(report.verdict, SepVerdict::Separable);
    assert!(!report.bound_entangled_candidate);
}

#[test]
fn dual_route_ppt_check_matches_partial_inversion_pd_test() {
    // PPT holds iff (g₁,g₂) ↦ φ(g₁,g₂⁻¹) is positive definite
    let pg = s3xs3();
    let mut r = rng(313);
    let mut cases: Vec<GroupFunction> = (0..10)
        .map(|seed| make_separable_sample(&pg, 2, seed))
        .collect();
    cases.push(state_function(&pg, &bell_state()).unwrap());
    cases.push(state_function(&pg, &pdfun_core::detect::werner_state(0.5)).unwrap());
    cases.push(normalized(&random_pd_function(&pg.data, &mut r), &pg.data));
    for (i, f) in cases.iter().enumerate() {
        let violations = check_ppt(f, &pg, 1e-9).unwrap();
        let inverted = GroupFunction::new(
            (0..pg.order())
                .map(|x| {
                    let (g1, g2) = pg.split_index(x);
                    f.values[pg.pair_index(g1, pg.right.group.inv(g2))]
                })
                .collect(),
        );
        let pd = is_positive_definite(&inverted, &pg.data, 1e-9).unwrap();
        assert_eq!(violations.is_empty(), pd.is_pd, "case {i}");
        if let Some(v) = violations.first() {
            assert!((v.eigenvalue - pd.min_eigenvalue).abs() < 1e-9);
        }
    }
}

#[test]
fn separable_verdict_requires_every_block_certified() {
    // mixture over all irreps: every block nonzero-or-zero, all certified
    let pg = s3xs3();
    for seed in 100..110 {
        let f = make_separable_sample(&pg, 8, seed);
        let report = check_separability(&f, &pg, 1e-8).unwrap();
        assert_eq!(report.verdict, SepVerdict::Separable, "seed {seed}");
        for b in &report.per_block {
            assert_eq!(b.verdict, SepVerdict::Separable);
        }
    }
}
