//! Separability analysis of positive definite functions on product groups:
//! the PPT criterion, per-block verdicts with exact answers in low
//! dimensions, map-based detection, and certified separable sampling.
//!
//! Per block with factor dimensions (n, m):
//! * a zero block or a one-dimensional factor is separable outright;
//! * for (2,2), (2,3), (3,2) the PPT verdict is exact;
//! * otherwise a PPT violation proves entanglement and a pass leaves the
//!   block undecided.
//!
//! A function whose blocks all pass PPT but carries an undecided block with
//! both factors at least 3-dimensional is flagged as a bound-entanglement
//! candidate: entanglement there, if any, is invisible to the inversion map.

use crate::error::{Error, Result};
use crate::group::GroupData;
use crate::harmonic::{characteristic_function, fourier_forward, GroupFunction};
use crate::linalg::{
    frob_norm, hermitian_eigenvalues, min_eigenpair, partial_transpose_second, random_unit_vector,
    CMat,
};
use crate::maps::{
    apply_extended, ClassifyBudget, MapClassification, PdMapSpec, PdStatus, PointMass,
};
use crate::positivity::{is_positive_definite, PdVerdict};
use crate::ProductGroup;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepVerdict {
    Separable,
    Entangled,
    PptUndecided,
}

impl SepVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SepVerdict::Separable => "separable",
            SepVerdict::Entangled => "entangled",
            SepVerdict::PptUndecided => "ppt_undecided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepMethod {
    ZeroBlock,
    OneDimensionalFactor,
    PptExact,
    PptNecessary,
}

impl SepMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SepMethod::ZeroBlock => "zero_block",
            SepMethod::OneDimensionalFactor => "one_dimensional_factor",
            SepMethod::PptExact => "ppt_exact",
            SepMethod::PptNecessary => "ppt_necessary",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlockReport {
    pub block: String,
    pub factor_dims: (usize, usize),
    pub verdict: SepVerdict,
    pub method: SepMethod,
    pub min_pt_eigenvalue: Option<f64>,
}

/// A detector that fired: applying `map` broke positive definiteness on the
/// named block with the given eigenvalue.
#[derive(Debug, Clone)]
pub struct DetectorHit {
    pub map: String,
    pub block: String,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    pub verdict: SepVerdict,
    pub per_block: Vec<BlockReport>,
    pub detectors_fired: Vec<DetectorHit>,
    pub bound_entangled_candidate: bool,
}

/// One PPT violation: a block whose partial transpose has a negative eigenvalue.
#[derive(Debug, Clone)]
pub struct PtViolation {
    pub block: String,
    pub eigenvalue: f64,
}

/// Partial-transpose criterion. Requires a positive definite input; returns
/// every block
/// whose partial transpose has an eigenvalue below −tol·scale. Empty iff PPT
/// holds, i.e. iff (g₁,g₂) ↦ φ(g₁,g₂⁻¹) is positive definite.
pub fn check_ppt(f: &GroupFunction, pg: &ProductGroup, tol: f64) -> Result<Vec<PtViolation>> {
    let pd = is_positive_definite(f, &pg.data, tol)?;
    if !pd.is_pd {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: pd.min_eigenvalue,
        });
    }
    let blocks = fourier_forward(f, &pg.data)?;
    let mut out = Vec::new();
    for (k, blk) in blocks.blocks.iter().enumerate() {
        let (n, m) = pg.factor_dims(k);
        let pt = partial_transpose_second(blk, n, m);
        let scale = 1.0 + frob_norm(&pt);
        let (lam, _) = min_eigenpair(&pt);
        if lam < -tol * scale {
            out.push(PtViolation {
                block: pg.data.table.irreps[k].label.clone(),
                eigenvalue: lam,
            });
        }
    }
    Ok(out)
}

/// Full per-block separability analysis of a normalized PD function.
pub fn check_separability(
    f: &GroupFunction,
    pg: &ProductGroup,
    tol: f64,
) -> Result<SeparabilityReport> {
    let at_e = f.value_at_identity(&pg.data);
    if (at_e - Complex64::ONE).norm() > 1e-9 {
        return Err(Error::Unnormalized {
            re: at_e.re,
            im: at_e.im,
        });
    }
    let pd = is_positive_definite(f, &pg.data, tol)?;
    if !pd.is_pd {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: pd.min_eigenvalue,
        });
    }

    let blocks = fourier_forward(f, &pg.data)?;
    let scale = 1.0 + blocks.blocks.iter().map(frob_norm).fold(0.0, f64::max);

    let mut per_block = Vec::new();
    let mut any_undecided_3x3 = false;
    for (k, blk) in blocks.blocks.iter().enumerate() {
        let label = pg.data.table.irreps[k].label.clone();
        let dims = pg.factor_dims(k);
        let (n, m) = dims;

        if frob_norm(blk) <= tol * scale {
            per_block.push(BlockReport {
                block: label,
                factor_dims: dims,
                verdict: SepVerdict::Separable,
                method: SepMethod::ZeroBlock,
                min_pt_eigenvalue: None,
            });
            continue;
        }
        if n.min(m) == 1 {
            per_block.push(BlockReport {
                block: label,
                factor_dims: dims,
                verdict: SepVerdict::Separable,
                method: SepMethod::OneDimensionalFactor,
                min_pt_eigenvalue: None,
            });
            continue;
        }

        let pt = partial_transpose_second(blk, n, m);
        let (lam, _) = min_eigenpair(&pt);
        let pt_ok = lam >= -tol * (1.0 + frob_norm(&pt));
        let exact = n.min(m) <= 2 && n.max(m) <= 3;
        let (verdict, method) = match (exact, pt_ok) {
            (true, true) => (SepVerdict::Separable, SepMethod::PptExact),
            (true, false) => (SepVerdict::Entangled, SepMethod::PptExact),
            (false, true) => (SepVerdict::PptUndecided, SepMethod::PptNecessary),
            (false, false) => (SepVerdict::Entangled, SepMethod::PptNecessary),
        };
        if verdict == SepVerdict::PptUndecided && n.min(m) >= 3 {
            any_undecided_3x3 = true;
        }
        per_block.push(BlockReport {
            block: label,
            factor_dims: dims,
            verdict,
            method,
            min_pt_eigenvalue: Some(lam),
        });
    }

    let any_entangled = per_block.iter().any(|b| b.verdict == SepVerdict::Entangled);
    let all_separable = per_block.iter().all(|b| b.verdict == SepVerdict::Separable);
    let verdict = if any_entangled {
        SepVerdict::Entangled
    } else if all_separable {
        SepVerdict::Separable
    } else {
        SepVerdict::PptUndecided
    };

    Ok(SeparabilityReport {
        verdict,
        per_block,
        detectors_fired: Vec::new(),
        bound_entangled_candidate: !any_entangled && any_undecided_3x3,
    })
}

#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub fired: bool,
    /// Witness block of (id⊗Λ)φ and its eigenvalue when the detector fired.
    pub block: Option<String>,
    pub eigenvalue: Option<f64>,
    pub verdict: PdVerdict,
}

/// Single-detector test: fired iff (id⊗Λ)φ is not positive definite. Maps
/// with a positive-definiteness counterexample on record are rejected;
/// detection is only sound for PD maps.
pub fn detect_with_map(
    f: &GroupFunction,
    src: &ProductGroup,
    dst: &ProductGroup,
    map: &PdMapSpec,
    classification: &MapClassification,
    tol: f64,
) -> Result<DetectionResult> {
    if classification.is_pd == PdStatus::CounterexampleFound {
        return Err(Error::MapNotPd);
    }
    let mapped = apply_extended(map, src, dst, f)?;
    let verdict = is_positive_definite(&mapped, &dst.data, tol)?;
    let fired = !verdict.is_pd;
    Ok(DetectionResult {
        fired,
        block: verdict.witness.as_ref().map(|w| w.block.clone()),
        eigenvalue: if fired {
            Some(verdict.min_eigenvalue)
        } else {
            None
        },
        verdict,
    })
}

/// Horodecki-style scan of a single-block state ρ at product irrep `block`:
/// for every supplied map Λ and every target irrep γ, check
/// (1_α ⊗ Λ̂_γ^β)ρ ≥ 0 directly on the block family.
pub fn horodecki_scan(
    pg: &ProductGroup,
    block: usize,
    rho: &CMat,
    maps: &[(PdMapSpec, MapClassification)],
    tol: f64,
) -> Result<SeparabilityReport> {
    let dim = pg.data.table.irreps[block].dim;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::BlockShape {
            block: pg.data.table.irreps[block].label.clone(),
            rows: rho.nrows(),
            cols: rho.ncols(),
            expected: dim,
        });
    }
    let tr: Complex64 = rho.diagonal().iter().sum();
    if (tr - Complex64::ONE).norm() > 1e-9 {
        return Err(Error::NotAState(format!("trace {}+{}i", tr.re, tr.im)));
    }
    let scale = 1.0 + frob_norm(rho);
    if crate::linalg::hermiticity_defect(rho) > tol * scale || min_eigenpair(rho).0 < -tol * scale {
        return Err(Error::NotAState("operator is not PSD".into()));
    }

    let (alpha, beta) = pg.pairs[block];
    let n_alpha = pg.left.table.irreps[alpha].dim;

    let mut hits = Vec::new();
    for (map, classification) in maps {
        if classification.is_pd == PdStatus::CounterexampleFound {
            return Err(Error::MapNotPd);
        }
        let fam = crate::maps::map_to_blocks(map, &pg.right, &pg.right)?;
        for (gamma, row) in fam.blocks.iter().enumerate() {
            let op = &row[beta];
            let out = op.apply_second_factor(rho, n_alpha);
            let out_scale = 1.0 + frob_norm(&out);
            let (lam, _) = min_eigenpair(&out);
            if lam < -tol * out_scale {
                hits.push(DetectorHit {
                    map: map.name.clone(),
                    block: format!(
                        "{},{}",
                        pg.left.table.irreps[alpha].label, pg.right.table.irreps[gamma].label
                    ),
                    eigenvalue: lam,
                });
            }
        }
    }

    let verdict = if hits.is_empty() {
        SepVerdict::PptUndecided
    } else {
        SepVerdict::Entangled
    };
    Ok(SeparabilityReport {
        verdict,
        per_block: Vec::new(),
        detectors_fired: hits,
        bound_entangled_candidate: false,
    })
}

/// A certified separable mixture Σ_m p_m ε_m(g₁) η_m(g₂) with pure factors drawn
/// from random irreps and unit vectors, and random convex weights.
/// Deterministic for a fixed seed.
pub fn make_separable_sample(pg: &ProductGroup, k: usize, seed: u64) -> GroupFunction {
    assert!(k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);

    let mut values = vec![Complex64::ZERO; pg.order()];
    for &p in &weights {
        let ai = rng.random_range(0..pg.left.table.irreps.len());
        let bi = rng.random_range(0..pg.right.table.irreps.len());
        let va = random_unit_vector(&mut rng, pg.left.table.irreps[ai].dim);
        let vb = random_unit_vector(&mut rng, pg.right.table.irreps[bi].dim);
        let eps = GroupFunction::pure_from_vector(&pg.left, ai, &va);
        let eta = GroupFunction::pure_from_vector(&pg.right, bi, &vb);
        for g1 in 0..pg.left.order() {
            for g2 in 0..pg.right.order() {
                values[pg.pair_index(g1, g2)] +=
                    Complex64::new(p, 0.0) * eps.values[g1] * eta.values[g2];
            }
        }
    }
    GroupFunction::new(values)
}

/// The bundled detector library on a group G: the inversion map, every
/// automorphism and anti-automorphism, and a few seeded convolution and
/// Kraus-sum maps. All carry positive-definiteness proofs by form.
pub fn bundled_detector_library(g: &GroupData, seed: u64) -> Vec<PdMapSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![PdMapSpec::inversion()];
    for (i, perm) in crate::group::automorphisms(&g.group)
        .into_iter()
        .enumerate()
    {
        out.push(PdMapSpec::automorphism(format!("auto{i}"), perm));
    }
    for (i, perm) in crate::group::anti_automorphisms(&g.group)
        .into_iter()
        .enumerate()
    {
        out.push(PdMapSpec::anti_automorphism(format!("anti{i}"), perm));
    }
    for i in 0..4 {
        let n_masses = rng.random_range(1..=3);
        let masses = (0..n_masses)
            .map(|_| PointMass {
                weight: Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                element: rng.random_range(0..g.order()),
            })
            .collect();
        out.push(PdMapSpec::convolution(format!("conv{i}"), masses));
    }
    out
}

/// Classify every map of a library once, for reuse across detections.
pub fn classify_library(
    maps: Vec<PdMapSpec>,
    g: &GroupData,
    budget: &ClassifyBudget,
    tol: f64,
) -> Result<Vec<(PdMapSpec, MapClassification)>> {
    maps.into_iter()
        .map(|m| {
            let cls = crate::maps::classify_map(&m, g, g, budget, tol)?;
            Ok((m, cls))
        })
        .collect()
}

// ---- reference states on a 2⊗2 block --------------------------------------

/// |Φ⁺⟩⟨Φ⁺| with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> CMat {
    let mut rho = CMat::zeros(4, 4);
    for &i in &[0usize, 3] {
        for &j in &[0usize, 3] {
            rho[(i, j)] = Complex64::new(0.5, 0.0);
        }
    }
    rho
}

/// Werner family p·|Φ⁺⟩⟨Φ⁺| + (1−p)·I/4; PPT holds iff p ≤ 1/3.
pub fn werner_state(p: f64) -> CMat {
    bell_state().scale(p) + CMat::identity(4, 4).scale((1.0 - p) / 4.0)
}

/// |00⟩⟨00|.
pub fn product_basis_state() -> CMat {
    let mut rho = CMat::zeros(4, 4);
    rho[(0, 0)] = Complex64::ONE;
    rho
}

/// Characteristic function of a state at the (std, std) block of a product
/// group whose factors both carry a 2-dim irrep labelled `std`.
pub fn state_function(pg: &ProductGroup, rho: &CMat) -> Result<GroupFunction> {
    let alpha = pg.left.table.index_of("std")?;
    let beta = pg.right.table.index_of("std")?;
    let block = pg.block_of(alpha, beta)?;
    characteristic_function(pg, block, rho, true)
}

/// Eigenvalues of the partial transpose of a state on C^n ⊗ C^m, ascending.
/// Independent oracle used by tests and reports.
pub fn partial_transpose_spectrum(rho: &CMat, n: usize, m: usize) -> Vec<f64> {
    hermitian_eigenvalues(&partial_transpose_second(rho, n, m))
}

/// A random mixed two-qubit state for exactness sweeps.
pub fn random_two_qubit_state<R: Rng>(rng: &mut R) -> CMat {
    crate::linalg::ginibre_state(rng, 4)
}
