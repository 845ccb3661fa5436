//! Thin helpers over dense complex matrices.
//!
//! Everything in this crate works on small matrices (dimension up to a few
//! hundred at the very largest, for joint system–ancilla spaces), so all
//! spectral questions go through a full Hermitian eigendecomposition.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// `Σ a_i conj(b_i)`, the inner product under which the Gramian of the
/// diagonal-Kraus vectors is exactly the coherence transfer factor:
/// a channel with diagonals `λ^{(i)}` maps `ρ_jk ↦ ⟨λ_j, λ_k⟩ ρ_jk`.
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    b.dotc(a)
}

/// Largest entry magnitude of `m`.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise difference `‖a - b‖_max`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest Hermiticity violation `max_jk |m_jk - conj(m_kj)|`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in j..n {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

/// `‖m - I‖_max`.
pub fn identity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((m[(j, k)] - target).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized as `(m + m†)/2` first, so callers may pass
/// matrices that are Hermitian only up to rounding. Returns the eigenvalues
/// and the matrix whose columns are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let herm = (m + m.adjoint()).scale(0.5);
    let se = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigs: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (eigs, vecs)
}

/// Minimum eigenvalue together with the spectral norm `max_i |w_i|`.
pub fn min_eig_and_norm(m: &CMat) -> (f64, f64) {
    let (eigs, _) = hermitian_eigen(m);
    let min = eigs.first().copied().unwrap_or(0.0);
    let norm = eigs.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
    (min, norm)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}
