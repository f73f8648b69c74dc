//! Positive-definiteness testing, the GNS reconstruction, purity
//! classification, and diagonal restriction.
//!
//! Two independent routes decide positive definiteness:
//!
//! * the block criterion: every Fourier block is Hermitian PSD;
//! * the Gram oracle: the |G|×|G| matrix M(g,h) = φ(g⁻¹h) is PSD.
//!
//! The two must agree on every input; the property tests and the acceptance
//! suite hold them against each other.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupData};
use crate::harmonic::{fourier_forward, GroupFunction};
use crate::linalg::{frob_norm, hermiticity_defect, min_eigenpair, CMat, CVec};
use crate::ProductGroup;
use num_complex::Complex64;

/// Why a verdict came out the way it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdReason {
    Ok,
    NegativeEigenvalue,
    /// A block (or the Gram matrix) deviates from Hermitian beyond tolerance.
    /// Reported instead of silently symmetrizing: non-Hermitian data means a
    /// corrupted input, not borderline numerics.
    NonHermitian,
}

impl PdReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            PdReason::Ok => "ok",
            PdReason::NegativeEigenvalue => "negative_eigenvalue",
            PdReason::NonHermitian => "non_hermitian",
        }
    }
}

/// Location of the minimal eigenvalue when a function fails the test.
#[derive(Debug, Clone, PartialEq)]
pub struct PdWitness {
    pub block: String,
    pub vector: CVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdVerdict {
    pub is_pd: bool,
    /// Global minimum eigenvalue over blocks of non-negligible norm (zero
    /// blocks are vacuously PSD and do not dilute the minimum).
    pub min_eigenvalue: f64,
    /// Effective absolute tolerance: `tol · (1 + max block Frobenius norm)`.
    pub tolerance: f64,
    pub witness: Option<PdWitness>,
    pub reason: PdReason,
}

/// Block criterion: φ is positive definite iff every Fourier block is PSD.
pub fn is_positive_definite(f: &GroupFunction, data: &GroupData, tol: f64) -> Result<PdVerdict> {
    f.check_domain(data)?;
    f.check_finite()?;
    let blocks = fourier_forward(f, data)?;

    let scale = 1.0 + blocks.blocks.iter().map(frob_norm).fold(0.0, f64::max);
    let tolerance = tol * scale;

    let mut min_eig = f64::INFINITY;
    let mut witness: Option<PdWitness> = None;
    let mut worst_defect = 0.0f64;
    let mut defect_block = String::new();

    for (blk, ir) in blocks.blocks.iter().zip(&data.table.irreps) {
        if frob_norm(blk) <= tolerance {
            continue; // numerically zero block
        }
        let defect = hermiticity_defect(blk);
        if defect > worst_defect {
            worst_defect = defect;
            defect_block = ir.label.clone();
        }
        let (lam, v) = min_eigenpair(blk);
        if lam < min_eig {
            min_eig = lam;
            witness = Some(PdWitness {
                block: ir.label.clone(),
                vector: v,
            });
        }
    }
    if !min_eig.is_finite() {
        // every block vanished: the zero function is positive definite
        min_eig = 0.0;
        witness = None;
    }

    if worst_defect > tolerance {
        return Ok(PdVerdict {
            is_pd: false,
            min_eigenvalue: min_eig,
            tolerance,
            witness: Some(PdWitness {
                block: defect_block,
                vector: CVec::zeros(0),
            }),
            reason: PdReason::NonHermitian,
        });
    }

    let is_pd = min_eig >= -tolerance;
    Ok(PdVerdict {
        is_pd,
        min_eigenvalue: min_eig,
        tolerance,
        witness: if is_pd { None } else { witness },
        reason: if is_pd {
            PdReason::Ok
        } else {
            PdReason::NegativeEigenvalue
        },
    })
}

/// Gram matrix M(g,h) = φ(g⁻¹h).
pub fn gram_matrix(f: &GroupFunction, group: &FiniteGroup) -> CMat {
    let n = group.order();
    CMat::from_fn(n, n, |g, h| f.values[group.mul(group.inv(g), h)])
}

/// Brute-force oracle: eigendecomposition of the full Gram matrix. Must agree
/// with [`is_positive_definite`] on every input.
pub fn pd_oracle_gram(f: &GroupFunction, group: &FiniteGroup, tol: f64) -> Result<PdVerdict> {
    if f.values.len() != group.order() {
        return Err(Error::DomainMismatch {
            expected: group.order(),
            got: f.values.len(),
        });
    }
    f.check_finite()?;
    let m = gram_matrix(f, group);
    let scale = 1.0 + frob_norm(&m);
    let tolerance = tol * scale;
    let (lam, v) = min_eigenpair(&m);

    if hermiticity_defect(&m) > tolerance {
        return Ok(PdVerdict {
            is_pd: false,
            min_eigenvalue: lam,
            tolerance,
            witness: Some(PdWitness {
                block: "gram".into(),
                vector: CVec::zeros(0),
            }),
            reason: PdReason::NonHermitian,
        });
    }
    let is_pd = lam >= -tolerance;
    Ok(PdVerdict {
        is_pd,
        min_eigenvalue: lam,
        tolerance,
        witness: if is_pd {
            None
        } else {
            Some(PdWitness {
                block: "gram".into(),
                vector: v,
            })
        },
        reason: if is_pd {
            PdReason::Ok
        } else {
            PdReason::NegativeEigenvalue
        },
    })
}

/// GNS reconstruction of a positive definite function: a Hilbert space of
/// dimension rank(M), a unitary representation, and a cyclic vector v with
/// φ(g) = ⟨v|π(g)v⟩.
#[derive(Debug, Clone)]
pub struct GnsData {
    pub dimension: usize,
    pub representation: Vec<CMat>,
    pub cyclic_vector: CVec,
}

impl GnsData {
    pub fn character(&self, g: usize) -> Complex64 {
        self.representation[g].diagonal().iter().sum()
    }

    /// max_g |⟨v|π(g)v⟩ − φ(g)|.
    pub fn reconstruction_error(&self, f: &GroupFunction) -> f64 {
        (0..f.len())
            .map(|g| {
                let val = (self.cyclic_vector.adjoint()
                    * &self.representation[g]
                    * &self.cyclic_vector)[(0, 0)];
                (val - f.values[g]).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Construct the GNS data by eigendecomposition of the Gram matrix, keeping
/// eigenvalues above `tol · λ_max` and compressing left translation onto the
/// retained eigenspace.
pub fn gns_construct(f: &GroupFunction, group: &FiniteGroup, tol: f64) -> Result<GnsData> {
    let verdict = pd_oracle_gram(f, group, tol)?;
    if !verdict.is_pd {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let n = group.order();
    let m = crate::linalg::hermitian_part(&gram_matrix(f, group));
    let eig = m.symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = tol * lam_max;
    let kept: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > cutoff).collect();
    let r = kept.len();

    // embedding ι = D^{1/2} U_r†, pseudo-inverse ι⁺ = U_r D^{−1/2}
    let mut iota = CMat::zeros(r, n);
    let mut iota_pinv = CMat::zeros(n, r);
    for (row, &i) in kept.iter().enumerate() {
        let s = eig.eigenvalues[i].sqrt();
        for gidx in 0..n {
            iota[(row, gidx)] = eig.eigenvectors[(gidx, i)].conj() * s;
            iota_pinv[(gidx, row)] = eig.eigenvectors[(gidx, i)] / s;
        }
    }

    // left translation permutation: P(a) δ_b = δ_{a·b}
    let representation = (0..n)
        .map(|a| {
            let mut p = CMat::zeros(n, n);
            for b in 0..n {
                p[(group.mul(a, b), b)] = Complex64::ONE;
            }
            &iota * p * &iota_pinv
        })
        .collect();

    let mut delta_e = CVec::zeros(n);
    delta_e[group.identity()] = Complex64::ONE;
    let cyclic_vector = &iota * delta_e;

    Ok(GnsData {
        dimension: r,
        representation,
        cyclic_vector,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityReport {
    pub is_pure: bool,
    /// Label of the single nonzero block when there is exactly one.
    pub block: Option<String>,
    /// Numerical rank of that block.
    pub rank: Option<usize>,
}

/// A normalized PD function is pure iff exactly one Fourier block is nonzero
/// and that block has numerical rank one.
pub fn is_pure(f: &GroupFunction, data: &GroupData, tol: f64) -> Result<PurityReport> {
    f.check_domain(data)?;
    let at_e = f.value_at_identity(data);
    if (at_e - Complex64::ONE).norm() > 1e-9 {
        return Err(Error::Unnormalized {
            re: at_e.re,
            im: at_e.im,
        });
    }
    let blocks = fourier_forward(f, data)?;
    let scale = 1.0 + blocks.blocks.iter().map(frob_norm).fold(0.0, f64::max);
    let nonzero: Vec<usize> = (0..blocks.blocks.len())
        .filter(|&k| frob_norm(&blocks.blocks[k]) > tol * scale)
        .collect();
    if nonzero.len() != 1 {
        return Ok(PurityReport {
            is_pure: false,
            block: None,
            rank: None,
        });
    }
    let k = nonzero[0];
    let rank = crate::linalg::numerical_rank(&blocks.blocks[k], tol);
    Ok(PurityReport {
        is_pure: rank == 1,
        block: Some(data.table.irreps[k].label.clone()),
        rank: Some(rank),
    })
}

/// Restriction to the diagonal: φ|_Δ(g) = φ(g,g) on a product of equal factors.
/// Preserves positive definiteness.
pub fn restrict_to_diagonal(f: &GroupFunction, pg: &ProductGroup) -> Result<GroupFunction> {
    if pg.left.id != pg.right.id || pg.left.order() != pg.right.order() {
        return Err(Error::FactorsDiffer {
            left: pg.left.id.clone(),
            right: pg.right.id.clone(),
        });
    }
    f.check_domain(&pg.data)?;
    let values = (0..pg.left.order())
        .map(|g| f.values[pg.pair_index(g, g)])
        .collect();
    Ok(GroupFunction { values })
}

/// Haar mean ∫ dg f(g) = (1/|G|) Σ_g f(g). Real and ≥ 0 for PD input.
pub fn haar_mean(f: &GroupFunction) -> Complex64 {
    let n = f.len();
    f.values.iter().sum::<Complex64>() / Complex64::new(n as f64, 0.0)
}

/// The inverted function g ↦ φ(g⁻¹); equals conj(φ) and is PD when φ is.
pub fn invert_argument(f: &GroupFunction, group: &FiniteGroup) -> GroupFunction {
    GroupFunction {
        values: (0..group.order()).map(|g| f.values[group.inv(g)]).collect(),
    }
}
