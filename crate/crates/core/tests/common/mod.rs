//! Shared generators for the integration suites. All randomness is ChaCha8
//! seeded, so every suite is reproducible run to run.
#![allow(dead_code)] // each test target uses a different subset

use nalgebra::DMatrix;
use num_complex::Complex64;
use pdfun_core::harmonic::{fourier_inverse, FourierBlocks, GroupFunction};
use pdfun_core::linalg::{random_complex_matrix, CMat};
use pdfun_core::GroupData;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Arbitrary complex values, no structure at all.
pub fn random_function(data: &GroupData, rng: &mut ChaCha8Rng) -> GroupFunction {
    use rand::Rng;
    GroupFunction::new(
        (0..data.order())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect(),
    )
}

/// Positive definite by construction: random PSD Fourier blocks G·G†.
pub fn random_pd_function(data: &GroupData, rng: &mut ChaCha8Rng) -> GroupFunction {
    let blocks = data
        .table
        .irreps
        .iter()
        .map(|ir| {
            let g = random_complex_matrix(rng, ir.dim, ir.dim);
            &g * g.adjoint()
        })
        .collect();
    fourier_inverse(&FourierBlocks { blocks }, data).unwrap()
}

/// Hermitian blocks, generically indefinite.
pub fn random_hermitian_function(data: &GroupData, rng: &mut ChaCha8Rng) -> GroupFunction {
    let blocks = data
        .table
        .irreps
        .iter()
        .map(|ir| {
            let g: CMat = random_complex_matrix(rng, ir.dim, ir.dim);
            (&g + g.adjoint()).scale(0.5)
        })
        .collect();
    fourier_inverse(&FourierBlocks { blocks }, data).unwrap()
}

/// Random complex blocks without symmetry.
pub fn random_blocks(data: &GroupData, rng: &mut ChaCha8Rng) -> FourierBlocks {
    FourierBlocks {
        blocks: data
            .table
            .irreps
            .iter()
            .map(|ir| random_complex_matrix(rng, ir.dim, ir.dim))
            .collect(),
    }
}

/// Rescale so the value at the identity is exactly 1.
pub fn normalized(f: &GroupFunction, data: &GroupData) -> GroupFunction {
    let v = f.value_at_identity(data);
    GroupFunction::new(f.values.iter().map(|z| z / v).collect())
}

pub fn max_entry_error(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
