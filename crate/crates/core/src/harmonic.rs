//! Non-commutative Fourier transform between group functions and matrix
//! block families.
//!
//! Conventions, with dg the normalized counting measure and d_k the irrep
//! dimension:
//!
//! ```text
//! forward:  f̂_k = d_k ∫ dg f(g) π_k(g)†
//! inverse:  f(g) = Σ_k tr[ f̂_k π_k(g) ]
//! ```
//!
//! On a finite group the series is a finite sum, so forward∘inverse and
//! inverse∘forward are exact identities. A product group is handled by the
//! same two formulas through its Kronecker-product irrep table; a single
//! group is the degenerate case of a trivial second factor.

use crate::error::{Error, Result};
use crate::group::GroupData;
use crate::linalg::{frob_norm, CMat};
use crate::ProductGroup;
use num_complex::Complex64;

/// A complex-valued function on a group, one value per element index.
/// For a product group the index of (g₁,g₂) is `g₁·|G₂| + g₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    pub values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        GroupFunction { values }
    }

    pub fn constant(order: usize, value: Complex64) -> Self {
        GroupFunction {
            values: vec![value; order],
        }
    }

    /// The function |G|·[g = e] whose blocks are d_k·I.
    pub fn scaled_delta_at_identity(data: &GroupData) -> Self {
        let n = data.order();
        let mut values = vec![Complex64::ZERO; n];
        values[data.group.identity()] = Complex64::new(n as f64, 0.0);
        GroupFunction { values }
    }

    /// Pure function ⟨v|π_α(g)v⟩ for a unit vector v.
    pub fn pure_from_vector(data: &GroupData, alpha: usize, v: &crate::linalg::CVec) -> Self {
        let ir = &data.table.irreps[alpha];
        assert_eq!(v.len(), ir.dim);
        let values = (0..data.order())
            .map(|g| (v.adjoint() * &ir.matrices[g] * v)[(0, 0)])
            .collect();
        GroupFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_at_identity(&self, data: &GroupData) -> Complex64 {
        self.values[data.group.identity()]
    }

    pub fn check_domain(&self, data: &GroupData) -> Result<()> {
        if self.values.len() != data.order() {
            return Err(Error::DomainMismatch {
                expected: data.order(),
                got: self.values.len(),
            });
        }
        Ok(())
    }

    pub fn check_finite(&self) -> Result<()> {
        for (i, z) in self.values.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(())
    }

    /// Pointwise linear combination a·f + b·g.
    pub fn linear_combination(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Self {
        assert_eq!(f.len(), g.len());
        GroupFunction {
            values: f
                .values
                .iter()
                .zip(&g.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }
}

/// The family {f̂_k} of Fourier blocks, aligned with the irrep table order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBlocks {
    pub blocks: Vec<CMat>,
}

impl FourierBlocks {
    pub fn zeros(data: &GroupData) -> Self {
        FourierBlocks {
            blocks: data
                .table
                .irreps
                .iter()
                .map(|ir| CMat::zeros(ir.dim, ir.dim))
                .collect(),
        }
    }

    pub fn check_shapes(&self, data: &GroupData) -> Result<()> {
        if self.blocks.len() != data.table.irreps.len() {
            return Err(Error::Data(format!(
                "{} blocks for a table of {} irreps",
                self.blocks.len(),
                data.table.irreps.len()
            )));
        }
        for (b, ir) in self.blocks.iter().zip(&data.table.irreps) {
            if b.nrows() != ir.dim || b.ncols() != ir.dim {
                return Err(Error::BlockShape {
                    block: ir.label.clone(),
                    rows: b.nrows(),
                    cols: b.ncols(),
                    expected: ir.dim,
                });
            }
        }
        Ok(())
    }

    /// Σ_k tr(f̂_k); equals f(e) for the blocks of f.
    pub fn trace_sum(&self) -> Complex64 {
        self.blocks
            .iter()
            .map(|b| b.diagonal().iter().sum::<Complex64>())
            .sum()
    }

    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| crate::linalg::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }
}

/// Forward transform f ↦ {f̂_k}. Summation runs in ascending element order so
/// results are bitwise deterministic.
pub fn fourier_forward(f: &GroupFunction, data: &GroupData) -> Result<FourierBlocks> {
    f.check_domain(data)?;
    let n = data.order();
    let haar = 1.0 / n as f64;
    let blocks = data
        .table
        .irreps
        .iter()
        .map(|ir| {
            let mut acc = CMat::zeros(ir.dim, ir.dim);
            for g in 0..n {
                acc += ir.matrices[g].adjoint() * f.values[g];
            }
            acc.scale(ir.dim as f64 * haar)
        })
        .collect();
    Ok(FourierBlocks { blocks })
}

/// Inverse transform {f̂_k} ↦ f, the finite Fourier series Σ_k tr[f̂_k π_k].
pub fn fourier_inverse(b: &FourierBlocks, data: &GroupData) -> Result<GroupFunction> {
    b.check_shapes(data)?;
    let n = data.order();
    let values = (0..n)
        .map(|g| {
            let mut s = Complex64::ZERO;
            for (blk, ir) in b.blocks.iter().zip(&data.table.irreps) {
                // tr(blk · π(g)) without forming the product
                let pi = &ir.matrices[g];
                for i in 0..ir.dim {
                    for j in 0..ir.dim {
                        s += blk[(i, j)] * pi[(j, i)];
                    }
                }
            }
            s
        })
        .collect();
    Ok(GroupFunction { values })
}

/// Characteristic function φ_ρ(g₁,g₂) = tr[ρ π_α(g₁)⊗τ_β(g₂)] of an operator
/// ρ living on the product irrep at `block`. Its forward transform has ρ as
/// the single nonzero block.
///
/// With `as_state = true`, ρ must have unit trace within 1e−9.
pub fn characteristic_function(
    pg: &ProductGroup,
    block: usize,
    rho: &CMat,
    as_state: bool,
) -> Result<GroupFunction> {
    let ir = &pg.data.table.irreps[block];
    if rho.nrows() != ir.dim || rho.ncols() != ir.dim {
        return Err(Error::BlockShape {
            block: ir.label.clone(),
            rows: rho.nrows(),
            cols: rho.ncols(),
            expected: ir.dim,
        });
    }
    if as_state {
        let tr: Complex64 = rho.diagonal().iter().sum();
        if (tr - Complex64::ONE).norm() > 1e-9 {
            return Err(Error::NotAState(format!(
                "trace is {}+{}i, expected 1",
                tr.re, tr.im
            )));
        }
    }
    let values = (0..pg.order())
        .map(|g| {
            let pi = &ir.matrices[g];
            let mut s = Complex64::ZERO;
            for i in 0..ir.dim {
                for j in 0..ir.dim {
                    s += rho[(i, j)] * pi[(j, i)];
                }
            }
            s
        })
        .collect();
    Ok(GroupFunction { values })
}

/// Max entrywise distance between two functions on the same domain.
pub fn max_value_distance(a: &GroupFunction, b: &GroupFunction) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius-type norm of a block family, used for relative tolerances.
pub fn blocks_scale(b: &FourierBlocks) -> f64 {
    1.0 + b.blocks.iter().map(frob_norm).fold(0.0, f64::max)
}
