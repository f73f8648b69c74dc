//! Small helpers over `nalgebra` complex matrices: Hermitian eigenproblems,
//! vectorization, Kronecker-structured partial operations, and seeded sampling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn frob_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian part (A + A†)/2.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Frobenius norm of A − A†, the distance from being Hermitian.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    frob_norm(&(m - m.adjoint()))
}

/// Smallest eigenvalue and a corresponding unit eigenvector of a Hermitian matrix.
/// The input is Hermitized first; callers check the defect separately.
pub fn min_eigenpair(m: &CMat) -> (f64, CVec) {
    let n = m.nrows();
    if n == 0 {
        return (0.0, CVec::zeros(0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut idx = 0;
    for i in 1..n {
        if eig.eigenvalues[i] < eig.eigenvalues[idx] {
            idx = i;
        }
    }
    (
        eig.eigenvalues[idx],
        eig.eigenvectors.column(idx).into_owned(),
    )
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    min_eigenpair(m).0
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Row-major vectorization: vec(X)[i*cols + j] = X[(i, j)].
pub fn vec_row_major(x: &CMat) -> CVec {
    let (r, cols) = x.shape();
    CVec::from_fn(r * cols, |k, _| x[(k / cols, k % cols)])
}

pub fn unvec_row_major(v: &CVec, rows: usize, cols: usize) -> CMat {
    assert_eq!(v.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Partial transpose on the second tensor factor of an (a·b)×(a·b) matrix.
pub fn partial_transpose_second(m: &CMat, a: usize, b: usize) -> CMat {
    assert_eq!(m.nrows(), a * b);
    assert_eq!(m.ncols(), a * b);
    CMat::from_fn(a * b, a * b, |r, s| {
        let (i, k) = (r / b, r % b);
        let (j, l) = (s / b, s % b);
        m[(i * b + l, j * b + k)]
    })
}

/// Numerical rank with the relative cutoff `tol * s_max` on singular values.
pub fn numerical_rank(m: &CMat, tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol * smax)
        .count()
}

pub fn random_complex_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    let v = random_complex_vector(rng, n);
    let norm = v.norm();
    if norm == 0.0 {
        let mut e = CVec::zeros(n);
        e[0] = c(1.0, 0.0);
        e
    } else {
        v.unscale(norm)
    }
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Ginibre-sampled density matrix: G G† normalized to unit trace.
pub fn ginibre_state<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    let g = random_complex_matrix(rng, dim, dim);
    let m = &g * g.adjoint();
    let tr: Complex64 = m.diagonal().iter().sum();
    m.unscale(tr.re)
}
