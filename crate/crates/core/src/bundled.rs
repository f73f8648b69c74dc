//! Bundled groups with explicit irrep matrices: Z₂…Z₆, S₃, D₄, Q₈, A₄, and
//! products of these resolved by `AxB` names. Zero-setup inputs for the CLI
//! and the test suite.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupData, Irrep, IrrepTable, ProductGroup};
use crate::linalg::{c, CMat};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Names of all bundled single groups.
pub const BUNDLED_NAMES: [&str; 9] = ["z2", "z3", "z4", "z5", "z6", "s3", "d4", "q8", "a4"];

/// Resolve a bundled single group by name.
pub fn bundled_group(name: &str) -> Option<GroupData> {
    match name {
        "z2" => Some(cyclic(2)),
        "z3" => Some(cyclic(3)),
        "z4" => Some(cyclic(4)),
        "z5" => Some(cyclic(5)),
        "z6" => Some(cyclic(6)),
        "s3" => Some(symmetric3()),
        "d4" => Some(dihedral4()),
        "q8" => Some(quaternion8()),
        "a4" => Some(alternating4()),
        _ => None,
    }
}

/// Resolve `AxB` as the product of two bundled groups.
pub fn bundled_product(name: &str) -> Option<Result<ProductGroup>> {
    for (pos, ch) in name.char_indices() {
        if ch != 'x' {
            continue;
        }
        let (l, r) = (&name[..pos], &name[pos + 1..]);
        if let (Some(left), Some(right)) = (bundled_group(l), bundled_group(r)) {
            return Some(ProductGroup::new(&left, &right));
        }
    }
    None
}

/// Cyclic group Z_n: addition mod n, characters χ_k(j) = exp(2πi jk/n).
pub fn cyclic(n: usize) -> GroupData {
    assert!(n >= 1);
    let mut mul = vec![0u32; n * n];
    let mut inv = vec![0u32; n];
    for a in 0..n {
        inv[a] = (((n - a) % n) as u32) % n as u32;
        for b in 0..n {
            mul[a * n + b] = ((a + b) % n) as u32;
        }
    }
    let labels = (0..n).map(|k| k.to_string()).collect();
    let group = FiniteGroup::new(n, mul, inv, 0, Some(labels)).unwrap();

    let irreps = (0..n)
        .map(|k| Irrep {
            label: format!("chi{k}"),
            dim: 1,
            matrices: (0..n)
                .map(|j| {
                    let t = 2.0 * PI * (j * k % n) as f64 / n as f64;
                    CMat::from_element(1, 1, c(t.cos(), t.sin()))
                })
                .collect(),
        })
        .collect();

    GroupData {
        id: format!("z{n}"),
        group,
        table: IrrepTable { irreps },
    }
}

/// The trivial group; degenerate second factor for single-group transforms.
pub fn trivial() -> GroupData {
    let mut d = cyclic(1);
    d.id = "z1".into();
    d
}

// ---- permutation machinery ----------------------------------------------

fn perm_compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a ∘ b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

fn perm_parity(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        s.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            s.push_str(&x.to_string());
            x = p[x];
        }
        s.push(')');
    }
    if s.is_empty() {
        "e".into()
    } else {
        s
    }
}

fn group_from_permutations(perms: &[Vec<usize>]) -> FiniteGroup {
    let n = perms.len();
    let index_of = |q: &[usize]| {
        perms
            .iter()
            .position(|p| p == q)
            .expect("closed under composition")
    };
    let mut mul = vec![0u32; n * n];
    for (i, a) in perms.iter().enumerate() {
        for (j, b) in perms.iter().enumerate() {
            mul[i * n + j] = index_of(&perm_compose(a, b)) as u32;
        }
    }
    let labels = perms.iter().map(|p| cycle_label(p)).collect();
    FiniteGroup::from_mul_table(n, mul)
        .unwrap()
        .with_labels(labels)
}

/// Orthonormal basis of the sum-zero subspace of R^k, as a k×(k−1) matrix.
fn sum_zero_basis(k: usize) -> CMat {
    let mut b = CMat::zeros(k, k - 1);
    for j in 0..k - 1 {
        // u_j = (1,…,1,−(j+1),0,…,0)/√((j+1)(j+2)) with j+1 leading ones
        let norm = ((j + 1) as f64 * (j + 2) as f64).sqrt();
        for i in 0..=j {
            b[(i, j)] = c(1.0 / norm, 0.0);
        }
        b[(j + 1, j)] = c(-((j + 1) as f64) / norm, 0.0);
    }
    b
}

/// The (k−1)-dimensional standard representation of a permutation, in the
/// fixed sum-zero basis. Real orthogonal.
fn standard_rep_matrix(p: &[usize], basis: &CMat) -> CMat {
    let k = p.len();
    let mut pm = CMat::zeros(k, k);
    for j in 0..k {
        pm[(p[j], j)] = c(1.0, 0.0);
    }
    basis.transpose() * pm * basis
}

/// Symmetric group S₃ on points {0,1,2}, elements in lexicographic one-line
/// order. Irreps: trivial, sign, and the real 2-dim standard representation.
pub fn symmetric3() -> GroupData {
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ];
    let group = group_from_permutations(&perms);
    let n = perms.len();
    let basis = sum_zero_basis(3);

    let triv = Irrep {
        label: "triv".into(),
        dim: 1,
        matrices: (0..n)
            .map(|_| CMat::from_element(1, 1, c(1.0, 0.0)))
            .collect(),
    };
    let sgn = Irrep {
        label: "sgn".into(),
        dim: 1,
        matrices: perms
            .iter()
            .map(|p| CMat::from_element(1, 1, c(perm_parity(p), 0.0)))
            .collect(),
    };
    let std2 = Irrep {
        label: "std".into(),
        dim: 2,
        matrices: perms
            .iter()
            .map(|p| standard_rep_matrix(p, &basis))
            .collect(),
    };

    GroupData {
        id: "s3".into(),
        group,
        table: IrrepTable {
            irreps: vec![triv, sgn, std2],
        },
    }
}

/// Alternating group A₄ on points {0,1,2,3}. Irreps: three characters of the
/// quotient by the Klein four-group and the real 3-dim standard representation.
pub fn alternating4() -> GroupData {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut items = vec![0, 1, 2, 3];
    permute_collect(&mut items, 0, &mut perms);
    perms.retain(|p| perm_parity(p) == 1.0);
    perms.sort();
    let group = group_from_permutations(&perms);
    let n = perms.len();
    let basis = sum_zero_basis(4);

    // Klein four-group: identity plus the three double transpositions (the
    // order-2 elements of A₄). Coset exponent along a fixed 3-cycle generates
    // the Z₃ quotient characters.
    let v4: Vec<usize> = (0..n).filter(|&g| group.element_order(g) <= 2).collect();
    let t = (0..n).find(|&g| group.element_order(g) == 3).unwrap();
    let mut coset_exp = vec![usize::MAX; n];
    for &v in &v4 {
        let mut x = v;
        for j in 0..3 {
            coset_exp[x] = j;
            x = group.mul(x, t);
        }
    }
    assert!(coset_exp.iter().all(|&e| e != usize::MAX));

    let omega = |k: usize, e: usize| {
        let tau = 2.0 * PI * ((k * e) % 3) as f64 / 3.0;
        c(tau.cos(), tau.sin())
    };
    let mut irreps: Vec<Irrep> = (0..3)
        .map(|k| Irrep {
            label: match k {
                0 => "triv".into(),
                1 => "omega".into(),
                _ => "omega2".into(),
            },
            dim: 1,
            matrices: (0..n)
                .map(|g| CMat::from_element(1, 1, omega(k, coset_exp[g])))
                .collect(),
        })
        .collect();
    irreps.push(Irrep {
        label: "std".into(),
        dim: 3,
        matrices: perms
            .iter()
            .map(|p| standard_rep_matrix(p, &basis))
            .collect(),
    });

    GroupData {
        id: "a4".into(),
        group,
        table: IrrepTable { irreps },
    }
}

fn permute_collect(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_collect(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Dihedral group D₄ of the square: elements r^a s^b indexed a + 4b.
/// Irreps: four characters and the real 2-dim rotation–reflection rep.
pub fn dihedral4() -> GroupData {
    let n = 8;
    let idx = |a: usize, b: usize| a + 4 * b;
    let mut mul = vec![0u32; n * n];
    for a in 0..4 {
        for bl in 0..2 {
            for cd in 0..4 {
                for d in 0..2 {
                    // (r^a s^bl)(r^cd s^d): s r^c = r^{-c} s
                    let a2 = if bl == 0 {
                        (a + cd) % 4
                    } else {
                        (a + 4 - cd) % 4
                    };
                    let b2 = (bl + d) % 2;
                    mul[idx(a, bl) * n + idx(cd, d)] = idx(a2, b2) as u32;
                }
            }
        }
    }
    let labels = (0..n)
        .map(|g| {
            let (a, b) = (g % 4, g / 4);
            match (a, b) {
                (0, 0) => "e".into(),
                (a, 0) => format!("r{a}"),
                (0, _) => "s".into(),
                (a, _) => format!("r{a}s"),
            }
        })
        .collect();
    let group = FiniteGroup::from_mul_table(n, mul)
        .unwrap()
        .with_labels(labels);

    let chi = |ur: f64, us: f64| -> Vec<CMat> {
        (0..n)
            .map(|g| {
                let (a, b) = (g % 4, g / 4);
                CMat::from_element(1, 1, c(ur.powi(a as i32) * us.powi(b as i32), 0.0))
            })
            .collect()
    };
    let rot = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let refl = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    let two = (0..n)
        .map(|g| {
            let (a, b) = (g % 4, g / 4);
            let mut m = CMat::identity(2, 2);
            for _ in 0..a {
                m = &rot * m;
            }
            if b == 1 {
                m *= &refl;
            }
            m
        })
        .collect();

    let irreps = vec![
        Irrep {
            label: "triv".into(),
            dim: 1,
            matrices: chi(1.0, 1.0),
        },
        Irrep {
            label: "sgn_s".into(),
            dim: 1,
            matrices: chi(1.0, -1.0),
        },
        Irrep {
            label: "sgn_r".into(),
            dim: 1,
            matrices: chi(-1.0, 1.0),
        },
        Irrep {
            label: "sgn_rs".into(),
            dim: 1,
            matrices: chi(-1.0, -1.0),
        },
        Irrep {
            label: "std".into(),
            dim: 2,
            matrices: two,
        },
    ];

    GroupData {
        id: "d4".into(),
        group,
        table: IrrepTable { irreps },
    }
}

/// Quaternion group Q₈ = {±1, ±i, ±j, ±k}. The multiplication table is read
/// off the faithful 2-dim representation by Pauli-type matrices.
pub fn quaternion8() -> GroupData {
    let n = 8;
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let zero = Complex64::ZERO;
    let m1 = CMat::from_row_slice(2, 2, &[one, zero, zero, one]);
    let mi = CMat::from_row_slice(2, 2, &[i, zero, zero, -i]);
    let mj = CMat::from_row_slice(2, 2, &[zero, one, -one, zero]);
    let mk = CMat::from_row_slice(2, 2, &[zero, i, i, zero]);
    let units: Vec<CMat> = vec![
        m1.clone(),
        -&m1,
        mi.clone(),
        -&mi,
        mj.clone(),
        -&mj,
        mk.clone(),
        -&mk,
    ];
    let labels: Vec<String> = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();

    let find = |m: &CMat| -> usize {
        units
            .iter()
            .position(|u| (u - m).iter().all(|z| z.norm() < 1e-12))
            .expect("product of units is a unit")
    };
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = find(&(&units[a] * &units[b])) as u32;
        }
    }
    let group = FiniteGroup::from_mul_table(n, mul)
        .unwrap()
        .with_labels(labels);

    // characters of Q₈/{±1} ≅ Z₂×Z₂; g/2 maps indices to the unit family
    // 0→±1, 1→±i, 2→±j, 3→±k
    let sign_char = |plus: &[usize]| -> Vec<CMat> {
        (0..n)
            .map(|g| {
                let v = if plus.contains(&(g / 2)) { 1.0 } else { -1.0 };
                CMat::from_element(1, 1, c(v, 0.0))
            })
            .collect()
    };
    let irreps = vec![
        Irrep {
            label: "triv".into(),
            dim: 1,
            matrices: sign_char(&[0, 1, 2, 3]),
        },
        Irrep {
            label: "chi_i".into(),
            dim: 1,
            matrices: sign_char(&[0, 1]),
        },
        Irrep {
            label: "chi_j".into(),
            dim: 1,
            matrices: sign_char(&[0, 2]),
        },
        Irrep {
            label: "chi_k".into(),
            dim: 1,
            matrices: sign_char(&[0, 3]),
        },
        Irrep {
            label: "std".into(),
            dim: 2,
            matrices: units,
        },
    ];

    GroupData {
        id: "q8".into(),
        group,
        table: IrrepTable { irreps },
    }
}

/// Resolve a name as bundled single group or bundled product.
pub fn resolve_name(name: &str) -> Result<ResolvedGroup> {
    if let Some(d) = bundled_group(name) {
        return Ok(ResolvedGroup::Single(d));
    }
    if let Some(p) = bundled_product(name) {
        return Ok(ResolvedGroup::Product(Box::new(p?)));
    }
    Err(Error::Data(format!(
        "`{name}` is not a bundled group; bundled: {} and products like s3xs3",
        BUNDLED_NAMES.join(", ")
    )))
}

#[derive(Debug, Clone)]
pub enum ResolvedGroup {
    Single(GroupData),
    Product(Box<ProductGroup>),
}

impl ResolvedGroup {
    pub fn data(&self) -> &GroupData {
        match self {
            ResolvedGroup::Single(d) => d,
            ResolvedGroup::Product(p) => &p.data,
        }
    }
}
