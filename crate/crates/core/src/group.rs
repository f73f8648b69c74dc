//! Finite groups with explicit multiplication tables, their unitary irreducible
//! representations, product groups, and exhaustive axiom verification.
//!
//! Elements are dense indices `0..order`. The Haar measure is fixed as the
//! normalized counting measure, so every integral in the crate is
//! `(1/order) * Σ_g`.

use crate::error::{Error, Result};
use crate::linalg::{c, frob_norm, CMat};
use num_complex::Complex64;
use std::fmt;

/// Default absolute tolerance on matrix entries for verification.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major table: `mul[a * order + b]` is the index of a·b.
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    pub fn new(
        order: usize,
        mul: Vec<u32>,
        inv: Vec<u32>,
        identity: u32,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::Data("group order must be positive".into()));
        }
        if mul.len() != order * order {
            return Err(Error::Data(format!(
                "multiplication table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if inv.len() != order {
            return Err(Error::Data(format!(
                "inverse table has {} entries, expected {}",
                inv.len(),
                order
            )));
        }
        if let Some(ref l) = labels {
            if l.len() != order {
                return Err(Error::Data(format!(
                    "{} element labels for a group of order {}",
                    l.len(),
                    order
                )));
            }
        }
        if identity as usize >= order {
            return Err(Error::Data("identity index out of range".into()));
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            identity,
            labels,
        })
    }

    /// Build from a multiplication table alone, deriving identity and inverses.
    pub fn from_mul_table(order: usize, mul: Vec<u32>) -> Result<Self> {
        if order == 0 || mul.len() != order * order {
            return Err(Error::Data("bad multiplication table".into()));
        }
        let idx = |a: usize, b: usize| mul[a * order + b] as usize;
        let mut identity = None;
        for e in 0..order {
            if (0..order).all(|g| idx(e, g) == g && idx(g, e) == g) {
                identity = Some(e as u32);
                break;
            }
        }
        let e =
            identity.ok_or_else(|| Error::Data("table has no identity element".into()))? as usize;
        let inv = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| idx(g, h) == e && idx(h, g) == e)
                    .map(|h| h as u32)
                    .ok_or_else(|| Error::Data(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<u32>>>()?;
        FiniteGroup::new(order, mul, inv, e as u32, None)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn mul_table(&self) -> &[u32] {
        &self.mul
    }

    pub fn inv_table(&self) -> &[u32] {
        &self.inv
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    /// Order of an element: smallest k ≥ 1 with g^k = e.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Conjugacy class of g as a sorted element list.
    pub fn conjugacy_class(&self, g: usize) -> Vec<usize> {
        let mut cls: Vec<usize> = (0..self.order)
            .map(|h| self.mul(self.mul(h, g), self.inv(h)))
            .collect();
        cls.sort_unstable();
        cls.dedup();
        cls
    }
}

/// One axiom violation found by [`verify_group`].
#[derive(Debug, Clone, PartialEq)]
pub enum GroupViolation {
    MulOutOfRange { a: usize, b: usize, value: u32 },
    Associativity { a: usize, b: usize, c: usize },
    IdentityNotNeutral { g: usize },
    InverseFails { g: usize },
}

impl fmt::Display for GroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupViolation::MulOutOfRange { a, b, value } => {
                write!(f, "mul({a},{b}) = {value} is out of range")
            }
            GroupViolation::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a},{b},{c})")
            }
            GroupViolation::IdentityNotNeutral { g } => {
                write!(f, "identity is not neutral at element {g}")
            }
            GroupViolation::InverseFails { g } => {
                write!(f, "inv({g}) is not a two-sided inverse")
            }
        }
    }
}

/// Exhaustively check closure, associativity, identity, and inverses.
/// Violations are data, not errors: the report is empty iff the table is a group.
pub fn verify_group(g: &FiniteGroup) -> Vec<GroupViolation> {
    let n = g.order();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let v = g.mul[a * n + b];
            if v as usize >= n {
                out.push(GroupViolation::MulOutOfRange { a, b, value: v });
            }
        }
    }
    if !out.is_empty() {
        // further checks would index out of range
        return out;
    }
    for a in 0..n {
        for b in 0..n {
            let ab = g.mul(a, b);
            for cc in 0..n {
                if g.mul(ab, cc) != g.mul(a, g.mul(b, cc)) {
                    out.push(GroupViolation::Associativity { a, b, c: cc });
                }
            }
        }
    }
    let e = g.identity();
    for x in 0..n {
        if g.mul(e, x) != x || g.mul(x, e) != x {
            out.push(GroupViolation::IdentityNotNeutral { g: x });
        }
        let xi = g.inv(x);
        if xi >= n || g.mul(x, xi) != e || g.mul(xi, x) != e {
            out.push(GroupViolation::InverseFails { g: x });
        }
    }
    out
}

/// A unitary irreducible representation given by explicit matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    /// One `dim`×`dim` matrix per element index.
    pub matrices: Vec<CMat>,
}

impl Irrep {
    pub fn character(&self, g: usize) -> Complex64 {
        self.matrices[g].diagonal().iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrrepTable {
    pub irreps: Vec<Irrep>,
}

impl IrrepTable {
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.irreps
            .iter()
            .position(|ir| ir.label == label)
            .ok_or_else(|| Error::UnknownIrrep(label.to_string()))
    }

    pub fn sum_of_squared_dims(&self) -> usize {
        self.irreps.iter().map(|ir| ir.dim * ir.dim).sum()
    }
}

/// One violation found by [`verify_irrep_table`].
#[derive(Debug, Clone, PartialEq)]
pub enum TableViolation {
    Homomorphism {
        irrep: String,
        g: usize,
        h: usize,
        error: f64,
    },
    Unitarity {
        irrep: String,
        g: usize,
        error: f64,
    },
    IdentityNotId {
        irrep: String,
        error: f64,
    },
    Completeness {
        sum_sq: usize,
        order: usize,
    },
    SchurOrthogonality {
        a: String,
        b: String,
        error: f64,
    },
    Irreducibility {
        irrep: String,
        character_norm_sq: f64,
    },
    Inequivalence {
        a: String,
        b: String,
        overlap: f64,
    },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::Homomorphism { irrep, g, h, error } => {
                write!(
                    f,
                    "irrep `{irrep}`: pi(g)pi(h) != pi(gh) at ({g},{h}), error {error:e}"
                )
            }
            TableViolation::Unitarity { irrep, g, error } => {
                write!(f, "irrep `{irrep}`: pi({g}) not unitary, error {error:e}")
            }
            TableViolation::IdentityNotId { irrep, error } => {
                write!(f, "irrep `{irrep}`: pi(e) != I, error {error:e}")
            }
            TableViolation::Completeness { sum_sq, order } => {
                write!(f, "sum of squared dims {sum_sq} != group order {order}")
            }
            TableViolation::SchurOrthogonality { a, b, error } => {
                write!(
                    f,
                    "Schur orthogonality fails between `{a}` and `{b}`, error {error:e}"
                )
            }
            TableViolation::Irreducibility {
                irrep,
                character_norm_sq,
            } => {
                write!(
                    f,
                    "irrep `{irrep}` is reducible: character norm^2 = {character_norm_sq}"
                )
            }
            TableViolation::Inequivalence { a, b, overlap } => {
                write!(
                    f,
                    "irreps `{a}` and `{b}` are equivalent: character overlap {overlap}"
                )
            }
        }
    }
}

/// Check homomorphism, unitarity, identity, Schur orthogonality of matrix
/// elements, Peter–Weyl completeness, irreducibility, and pairwise
/// inequivalence, all within `tol` on matrix entries.
///
/// A shape mismatch between a declared dimension and the supplied matrices is
/// an error, not a violation.
pub fn verify_irrep_table(
    group: &FiniteGroup,
    table: &IrrepTable,
    tol: f64,
) -> Result<Vec<TableViolation>> {
    let n = group.order();
    for ir in &table.irreps {
        if ir.matrices.len() != n {
            return Err(Error::Data(format!(
                "irrep `{}` has {} matrices for a group of order {}",
                ir.label,
                ir.matrices.len(),
                n
            )));
        }
        for m in &ir.matrices {
            if m.nrows() != ir.dim || m.ncols() != ir.dim {
                return Err(Error::IrrepShape {
                    irrep: ir.label.clone(),
                    declared: ir.dim,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
    }

    let mut out = Vec::new();
    let haar = 1.0 / n as f64;

    for ir in &table.irreps {
        let id = CMat::identity(ir.dim, ir.dim);
        let e_err = frob_norm(&(&ir.matrices[group.identity()] - &id));
        if e_err > tol {
            out.push(TableViolation::IdentityNotId {
                irrep: ir.label.clone(),
                error: e_err,
            });
        }
        for g in 0..n {
            let u_err = frob_norm(&(&ir.matrices[g] * ir.matrices[g].adjoint() - &id));
            if u_err > tol {
                out.push(TableViolation::Unitarity {
                    irrep: ir.label.clone(),
                    g,
                    error: u_err,
                });
            }
            for h in 0..n {
                let prod = &ir.matrices[g] * &ir.matrices[h];
                let hom_err = frob_norm(&(prod - &ir.matrices[group.mul(g, h)]));
                if hom_err > tol {
                    out.push(TableViolation::Homomorphism {
                        irrep: ir.label.clone(),
                        g,
                        h,
                        error: hom_err,
                    });
                }
            }
        }
    }

    let sum_sq = table.sum_of_squared_dims();
    if sum_sq != n {
        out.push(TableViolation::Completeness { sum_sq, order: n });
    }

    // Schur orthogonality of matrix elements:
    //   (1/|G|) Σ_g pi^a_ij(g) conj(pi^b_kl(g)) = δ_ab δ_ik δ_jl / dim_a
    for (ai, a) in table.irreps.iter().enumerate() {
        for (bi, b) in table.irreps.iter().enumerate() {
            if bi < ai {
                continue;
            }
            let mut worst = 0.0f64;
            for i in 0..a.dim {
                for j in 0..a.dim {
                    for k in 0..b.dim {
                        for l in 0..b.dim {
                            let mut s = Complex64::ZERO;
                            for g in 0..n {
                                s += a.matrices[g][(i, j)] * b.matrices[g][(k, l)].conj();
                            }
                            s *= haar;
                            let expected = if ai == bi && i == k && j == l {
                                c(1.0 / a.dim as f64, 0.0)
                            } else {
                                Complex64::ZERO
                            };
                            worst = worst.max((s - expected).norm());
                        }
                    }
                }
            }
            if worst > tol {
                out.push(TableViolation::SchurOrthogonality {
                    a: a.label.clone(),
                    b: b.label.clone(),
                    error: worst,
                });
            }
        }
    }

    // character criteria
    for (ai, a) in table.irreps.iter().enumerate() {
        let norm_sq: f64 = (0..n).map(|g| a.character(g).norm_sqr()).sum::<f64>() * haar;
        if (norm_sq - 1.0).abs() > tol {
            out.push(TableViolation::Irreducibility {
                irrep: a.label.clone(),
                character_norm_sq: norm_sq,
            });
        }
        for b in table.irreps.iter().skip(ai + 1) {
            let overlap: Complex64 = (0..n)
                .map(|g| a.character(g) * b.character(g).conj())
                .sum::<Complex64>()
                * haar;
            if overlap.norm() > tol {
                out.push(TableViolation::Inequivalence {
                    a: a.label.clone(),
                    b: b.label.clone(),
                    overlap: overlap.norm(),
                });
            }
        }
    }

    Ok(out)
}

/// A group together with a complete irrep table; the unit loaded from a group file.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupData {
    pub id: String,
    pub group: FiniteGroup,
    pub table: IrrepTable,
}

impl GroupData {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Partner index ᾱ with χ_ᾱ = conj(χ_α), found by character matching.
    pub fn conjugate_partner(&self, alpha: usize) -> Result<usize> {
        let n = self.group.order();
        let a = &self.table.irreps[alpha];
        let mut found = None;
        for (bi, b) in self.table.irreps.iter().enumerate() {
            if b.dim != a.dim {
                continue;
            }
            let worst = (0..n)
                .map(|g| (b.character(g) - a.character(g).conj()).norm())
                .fold(0.0, f64::max);
            if worst <= 1e-8 {
                found = Some(bi);
                break;
            }
        }
        found.ok_or_else(|| {
            Error::Data(format!(
                "no conjugate partner for irrep `{}`; table is incomplete",
                self.table.irreps[alpha].label
            ))
        })
    }
}

/// A product group G₁×G₂ with the derived table of Kronecker-product irreps.
///
/// Element (g₁,g₂) has index `g₁·|G₂| + g₂`; irrep pair (α,β) is stored at the
/// position recorded in `pairs`, with matrices π_α(g₁)⊗τ_β(g₂) and label
/// `"{α},{β}"`.
#[derive(Debug, Clone)]
pub struct ProductGroup {
    pub left: GroupData,
    pub right: GroupData,
    pub data: GroupData,
    pub pairs: Vec<(usize, usize)>,
}

impl ProductGroup {
    /// Construct the product. Both factor tables must verify cleanly at
    /// [`DEFAULT_TOL`]; anything else is rejected.
    pub fn new(left: &GroupData, right: &GroupData) -> Result<Self> {
        for (side, d) in [("left", left), ("right", right)] {
            let gv = verify_group(&d.group);
            if !gv.is_empty() {
                return Err(Error::UnverifiedFactors(format!(
                    "{side} factor `{}`: {}",
                    d.id, gv[0]
                )));
            }
            let tv = verify_irrep_table(&d.group, &d.table, DEFAULT_TOL)?;
            if !tv.is_empty() {
                return Err(Error::UnverifiedFactors(format!(
                    "{side} factor `{}`: {}",
                    d.id, tv[0]
                )));
            }
        }

        let n1 = left.order();
        let n2 = right.order();
        let order = n1 * n2;
        let pair_idx = |a: usize, b: usize| a * n2 + b;

        let mut mul = vec![0u32; order * order];
        let mut inv = vec![0u32; order];
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                let a = pair_idx(a1, a2);
                inv[a] = pair_idx(left.group.inv(a1), right.group.inv(a2)) as u32;
                for b1 in 0..n1 {
                    for b2 in 0..n2 {
                        let b = pair_idx(b1, b2);
                        mul[a * order + b] =
                            pair_idx(left.group.mul(a1, b1), right.group.mul(a2, b2)) as u32;
                    }
                }
            }
        }
        let identity = pair_idx(left.group.identity(), right.group.identity()) as u32;
        let labels = match (left.group.labels(), right.group.labels()) {
            (Some(l1), Some(l2)) => {
                let mut lab = Vec::with_capacity(order);
                for s1 in l1 {
                    for s2 in l2 {
                        lab.push(format!("({s1},{s2})"));
                    }
                }
                Some(lab)
            }
            _ => None,
        };
        let group = FiniteGroup::new(order, mul, inv, identity, labels)?;

        let mut irreps = Vec::new();
        let mut pairs = Vec::new();
        for (ai, a) in left.table.irreps.iter().enumerate() {
            for (bi, b) in right.table.irreps.iter().enumerate() {
                let mut matrices = Vec::with_capacity(order);
                for g1 in 0..n1 {
                    for g2 in 0..n2 {
                        matrices.push(a.matrices[g1].kronecker(&b.matrices[g2]));
                    }
                }
                irreps.push(Irrep {
                    label: format!("{},{}", a.label, b.label),
                    dim: a.dim * b.dim,
                    matrices,
                });
                pairs.push((ai, bi));
            }
        }

        Ok(ProductGroup {
            left: left.clone(),
            right: right.clone(),
            data: GroupData {
                id: format!("{}x{}", left.id, right.id),
                group,
                table: IrrepTable { irreps },
            },
            pairs,
        })
    }

    pub fn order(&self) -> usize {
        self.data.order()
    }

    #[inline]
    pub fn pair_index(&self, g1: usize, g2: usize) -> usize {
        g1 * self.right.order() + g2
    }

    #[inline]
    pub fn split_index(&self, g: usize) -> (usize, usize) {
        (g / self.right.order(), g % self.right.order())
    }

    /// Factor dimensions (n_α, m_β) of the product irrep at `block`.
    pub fn factor_dims(&self, block: usize) -> (usize, usize) {
        let (a, b) = self.pairs[block];
        (
            self.left.table.irreps[a].dim,
            self.right.table.irreps[b].dim,
        )
    }

    /// Index of the product irrep built from factor irreps (α, β).
    pub fn block_of(&self, alpha: usize, beta: usize) -> Result<usize> {
        self.pairs
            .iter()
            .position(|&p| p == (alpha, beta))
            .ok_or_else(|| Error::UnknownIrrep(format!("pair ({alpha},{beta})")))
    }
}

/// All automorphisms of a (verified) finite group, as permutations of element
/// indices. Backtracks over generator images, pruned by element order.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let gens = generating_set(g);
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    search_automorphisms(g, &gens, 0, &mut images, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// Anti-automorphisms: exactly the maps g ↦ σ(g⁻¹) with σ an automorphism.
pub fn anti_automorphisms(g: &FiniteGroup) -> Vec<Vec<u32>> {
    automorphisms(g)
        .into_iter()
        .map(|sigma| (0..g.order()).map(|x| sigma[g.inv(x)]).collect())
        .collect()
}

fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut gens = Vec::new();
    let mut closure = vec![false; n];
    closure[g.identity()] = true;
    let mut count = 1;
    while count < n {
        let next = (0..n).find(|&x| !closure[x]).unwrap();
        gens.push(next);
        // regenerate the closure of gens
        closure.iter_mut().for_each(|b| *b = false);
        closure[g.identity()] = true;
        let mut frontier = vec![g.identity()];
        count = 1;
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = g.mul(x, s);
                if !closure[y] {
                    closure[y] = true;
                    count += 1;
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

fn search_automorphisms(
    g: &FiniteGroup,
    gens: &[usize],
    depth: usize,
    images: &mut [usize],
    out: &mut Vec<Vec<u32>>,
) {
    let n = g.order();
    if depth == gens.len() {
        if let Some(phi) = extend_homomorphism(g, gens, images) {
            let mut seen = vec![false; n];
            let bijective = phi.iter().all(|&y| {
                let fresh = !seen[y as usize];
                seen[y as usize] = true;
                fresh
            });
            if bijective {
                out.push(phi);
            }
        }
        return;
    }
    let target_order = g.element_order(gens[depth]);
    for cand in 0..n {
        if g.element_order(cand) == target_order {
            images[depth] = cand;
            search_automorphisms(g, gens, depth + 1, images, out);
        }
    }
}

/// Extend generator images to a full map by closure; `None` if inconsistent.
fn extend_homomorphism(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<u32>> {
    let n = g.order();
    let mut phi = vec![u32::MAX; n];
    phi[g.identity()] = g.identity() as u32;
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let img = g.mul(phi[x] as usize, images[k]) as u32;
            if phi[y] == u32::MAX {
                phi[y] = img;
                frontier.push(y);
            } else if phi[y] != img {
                return None;
            }
        }
    }
    if phi.contains(&u32::MAX) {
        return None;
    }
    // full homomorphism check
    for a in 0..n {
        for b in 0..n {
            if g.mul(phi[a] as usize, phi[b] as usize) != phi[g.mul(a, b)] as usize {
                return None;
            }
        }
    }
    Some(phi)
}

/// Check that a permutation is an automorphism (σ(gh) = σ(g)σ(h), bijective).
pub fn is_automorphism(g: &FiniteGroup, perm: &[u32]) -> bool {
    let n = g.order();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p as usize >= n || seen[p as usize] {
            return false;
        }
        seen[p as usize] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if g.mul(perm[a] as usize, perm[b] as usize) != perm[g.mul(a, b)] as usize {
                return false;
            }
        }
    }
    true
}

/// Check that a permutation is an anti-automorphism (σ(gh) = σ(h)σ(g)).
pub fn is_anti_automorphism(g: &FiniteGroup, perm: &[u32]) -> bool {
    let n = g.order();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p as usize >= n || seen[p as usize] {
            return false;
        }
        seen[p as usize] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if g.mul(perm[b] as usize, perm[a] as usize) != perm[g.mul(a, b)] as usize {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::{cyclic, symmetric3};

    #[test]
    fn corrupted_z4_table_is_flagged() {
        let z4 = cyclic(4);
        let mut mul = z4.group.mul_table().to_vec();
        mul[4 + 2] = 0; // 1+2 should be 3
        let broken = FiniteGroup::new(4, mul, z4.group.inv_table().to_vec(), 0, None).unwrap();
        let report = verify_group(&broken);
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| matches!(
            v,
            GroupViolation::Associativity { .. } | GroupViolation::InverseFails { .. }
        )));
    }

    #[test]
    fn reducible_two_dim_rep_fails_irreducibility() {
        // replace the standard irrep of S3 by triv ⊕ sgn
        let mut d = symmetric3();
        let sgn: Vec<Complex64> = (0..6)
            .map(|g| d.table.irreps[1].matrices[g][(0, 0)])
            .collect();
        d.table.irreps[2] = Irrep {
            label: "reducible".into(),
            dim: 2,
            matrices: (0..6)
                .map(|g| {
                    let mut m = CMat::identity(2, 2);
                    m[(1, 1)] = sgn[g];
                    m
                })
                .collect(),
        };
        let report = verify_irrep_table(&d.group, &d.table, 1e-9).unwrap();
        let irr = report.iter().find_map(|v| match v {
            TableViolation::Irreducibility {
                character_norm_sq, ..
            } => Some(*character_norm_sq),
            _ => None,
        });
        assert!((irr.unwrap() - 2.0).abs() < 1e-12, "character norm^2 is 2");
    }

    #[test]
    fn declared_dimension_mismatch_is_an_error_not_a_violation() {
        let mut d = symmetric3();
        d.table.irreps[2].dim = 3;
        assert!(matches!(
            verify_irrep_table(&d.group, &d.table, 1e-9),
            Err(Error::IrrepShape { .. })
        ));
    }

    #[test]
    fn element_orders_and_classes_on_s3() {
        let d = symmetric3();
        let orders: Vec<usize> = (0..6).map(|g| d.group.element_order(g)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 1).count(), 1);
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
        // three conjugacy classes of sizes 1, 2, 3
        let mut sizes: Vec<usize> = (0..6).map(|g| d.group.conjugacy_class(g).len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn automorphism_and_anti_automorphism_checks() {
        let d = symmetric3();
        for a in automorphisms(&d.group) {
            assert!(is_automorphism(&d.group, &a));
        }
        for b in anti_automorphisms(&d.group) {
            assert!(is_anti_automorphism(&d.group, &b));
            // inversion-composed anti-automorphisms are automorphisms again
            let back: Vec<u32> = (0..6).map(|g| b[d.group.inv(g)]).collect();
            assert!(is_automorphism(&d.group, &back));
        }
        // the inversion permutation itself
        let inv_perm: Vec<u32> = (0..6).map(|g| d.group.inv(g) as u32).collect();
        assert!(is_anti_automorphism(&d.group, &inv_perm));
        assert!(!is_automorphism(&d.group, &inv_perm));
    }

    #[test]
    fn product_rejects_unverified_factors() {
        let good = symmetric3();
        let mut bad = symmetric3();
        bad.table.irreps.pop(); // incomplete table
        assert!(matches!(
            ProductGroup::new(&good, &bad),
            Err(Error::UnverifiedFactors(_))
        ));
    }

    #[test]
    fn abelian_automorphism_groups_have_known_sizes() {
        // |Aut(Z_n)| = φ(n)
        for (n, phi) in [(2usize, 1usize), (3, 2), (4, 2), (5, 4), (6, 2)] {
            let d = cyclic(n);
            assert_eq!(automorphisms(&d.group).len(), phi, "z{n}");
        }
    }
}
