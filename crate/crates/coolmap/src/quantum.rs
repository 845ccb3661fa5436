//! Validated quantum-mechanical value types and the primitives built on
//! them: PSD witnesses, Gram-vector extraction, channel application,
//! completeness and energy-conservation verification.
//!
//! Every type here is constructed through a validating constructor that
//! takes the tolerances explicitly; once constructed, values are immutable.

use thiserror::Error;

use crate::linalg::{
    self, hermitian_eigen, hermiticity_defect, CMat, CVec, C64,
};
use crate::tol::ToleranceSet;

/// Errors from validation and from the channel primitives. Each variant
/// carries the measured violation so failures are diagnosable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("not Hermitian (max |m_jk - conj(m_kj)| = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("trace is not 1 (|Tr - 1| = {defect:.3e})")]
    NotUnitTrace { defect: f64 },
    #[error("not positive-semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("not unitary (‖U†U - I‖_max = {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("Kraus set is not complete (‖Σ K†K - I‖_max = {defect:.3e})")]
    IncompleteKraus { defect: f64 },
    #[error("degenerate energy levels {i} and {j}")]
    DegenerateLevels { i: usize, j: usize },
    #[error("degenerate gaps: E_{} - E_{} matches E_{} - E_{}", .pair_a.0, .pair_a.1, .pair_b.0, .pair_b.1)]
    DegenerateGaps {
        pair_a: (usize, usize),
        pair_b: (usize, usize),
    },
    #[error("bad level partition: {reason}")]
    BadPartition { reason: String },
    #[error("empty spectrum")]
    EmptySpectrum,
}

pub type Result<T> = std::result::Result<T, QuantumError>;

// ---------------------------------------------------------------------------
// Energy spectra
// ---------------------------------------------------------------------------

/// Strictly increasing system energies with generic gaps: no two distinct
/// level pairs share the same energy difference.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    energies: Vec<f64>,
}

impl EnergySpectrum {
    /// Validate strict ordering and gap genericity within `gap_tol`.
    ///
    /// Error indices are 1-based level labels, matching the usual
    /// `E_1 < E_2 < …` naming.
    pub fn new(energies: Vec<f64>, gap_tol: f64) -> Result<Self> {
        let d = energies.len();
        if d == 0 {
            return Err(QuantumError::EmptySpectrum);
        }
        for i in 0..d.saturating_sub(1) {
            if energies[i + 1] - energies[i] <= gap_tol {
                return Err(QuantumError::DegenerateLevels { i: i + 1, j: i + 2 });
            }
        }
        // All unordered pairs (i < j) must have pairwise distinct gaps.
        let mut gaps: Vec<(f64, (usize, usize))> = Vec::new();
        for j in 1..d {
            for i in 0..j {
                gaps.push((energies[j] - energies[i], (j + 1, i + 1)));
            }
        }
        for a in 0..gaps.len() {
            for b in (a + 1)..gaps.len() {
                if (gaps[a].0 - gaps[b].0).abs() <= gap_tol {
                    return Err(QuantumError::DegenerateGaps {
                        pair_a: gaps[b].1,
                        pair_b: gaps[a].1,
                    });
                }
            }
        }
        Ok(EnergySpectrum { energies })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Smallest gap between consecutive levels.
    pub fn min_gap(&self) -> f64 {
        self.energies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// A d×d complex matrix validated to be Hermitian, PSD and of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validate `entries` as a density matrix, or report the violated
    /// invariant together with its magnitude.
    pub fn new(entries: CMat, tol: &ToleranceSet) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(QuantumError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let herm = hermiticity_defect(&entries);
        if herm > tol.herm_tol {
            return Err(QuantumError::NotHermitian { defect: herm });
        }
        let trace = entries.trace();
        let trace_defect = (trace - C64::new(1.0, 0.0)).norm();
        if trace_defect > tol.trace_tol {
            return Err(QuantumError::NotUnitTrace { defect: trace_defect });
        }
        let (min_eig, norm) = linalg::min_eig_and_norm(&entries);
        if min_eig < -tol.psd_tol * norm.max(1.0) {
            return Err(QuantumError::NotPsd { min_eigenvalue: min_eig });
        }
        Ok(DensityMatrix { mat: entries })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Real parts of the diagonal, clamped at zero from below (the validated
    /// matrix can carry eigenvalue-scale negative dust on the diagonal).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.mat[(j, j)].re.max(0.0)).collect()
    }
}

/// A complex Hermitian matrix (not necessarily PSD or normalized).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMat,
}

/// Outcome of a PSD check: the verdict plus the witness eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdWitness {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

impl HermitianMatrix {
    pub fn new(entries: CMat, herm_tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(QuantumError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let defect = hermiticity_defect(&entries);
        if defect > herm_tol {
            return Err(QuantumError::NotHermitian { defect });
        }
        Ok(HermitianMatrix { mat: entries })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// PSD verdict with the minimum eigenvalue as witness. `true` iff
    /// `min_eig ≥ -tol · max(1, spectral norm)`; total on Hermitian input.
    pub fn psd_witness(&self, tol: f64) -> PsdWitness {
        let (min_eig, norm) = linalg::min_eig_and_norm(&self.mat);
        PsdWitness {
            psd: min_eig >= -tol * norm.max(1.0),
            min_eigenvalue: min_eig,
        }
    }

    /// Vectors `λ_1 … λ_d` whose Gramian `⟨λ_j, λ_k⟩ = Σ_i λ_j^{(i)}
    /// conj(λ_k^{(i)})` reproduces this matrix.
    ///
    /// Uses the eigendecomposition `Q = V diag(w) V†` with `λ_j = √w ⊙`
    /// (j-th row of V), keeping only the directions above the numerical
    /// rank cut `w > tol · max(1, ‖Q‖)`, so the returned vectors have
    /// dimension equal to the numerical rank.
    pub fn gram_vectors(&self, tol: f64) -> Result<Vec<CVec>> {
        let witness = self.psd_witness(tol);
        if !witness.psd {
            return Err(QuantumError::NotPsd {
                min_eigenvalue: witness.min_eigenvalue,
            });
        }
        let d = self.dim();
        let (eigs, vecs) = hermitian_eigen(&self.mat);
        let norm = eigs.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
        let kept: Vec<usize> = (0..d).filter(|&i| eigs[i] > tol * norm.max(1.0)).collect();
        let rank = kept.len();
        let mut out = Vec::with_capacity(d);
        for j in 0..d {
            let mut lam = CVec::zeros(rank);
            for (slot, &i) in kept.iter().enumerate() {
                lam[slot] = vecs[(j, i)] * eigs[i].sqrt();
            }
            out.push(lam);
        }
        Ok(out)
    }

    /// Numerical rank: count of eigenvalues above `tol · max(1, ‖Q‖)`.
    pub fn numerical_rank(&self, tol: f64) -> usize {
        let (eigs, _) = hermitian_eigen(&self.mat);
        let norm = eigs.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
        eigs.iter().filter(|&&w| w > tol * norm.max(1.0)).count()
    }
}

/// Gramian `G_jk = ⟨v_j, v_k⟩` of a vector collection.
pub fn gramian_of(vectors: &[CVec], herm_tol: f64) -> Result<HermitianMatrix> {
    let d = vectors.len();
    let mut g = CMat::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            g[(j, k)] = linalg::inner(&vectors[j], &vectors[k]);
        }
    }
    HermitianMatrix::new(g, herm_tol)
}

/// A unitary matrix, validated as `‖U†U - I‖_max ≤ unit_tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    mat: CMat,
}

impl UnitaryMatrix {
    pub fn new(entries: CMat, unit_tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(QuantumError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let defect = unitarity_defect(&entries);
        if defect > unit_tol {
            return Err(QuantumError::NotUnitary { defect });
        }
        Ok(UnitaryMatrix { mat: entries })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }
}

/// `‖U†U - I‖_max` of an arbitrary square matrix.
pub fn unitarity_defect(u: &CMat) -> f64 {
    linalg::identity_defect(&(u.adjoint() * u))
}

// ---------------------------------------------------------------------------
// Kraus sets and channels
// ---------------------------------------------------------------------------

/// A set of Kraus operators, each `dim_out × dim_in`.
///
/// Completeness `Σ K_i†K_i = I` is checkable, not enforced at construction;
/// see [`KrausSet::completeness`].
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<CMat>,
}

/// Outcome of a completeness check: verdict plus the defect
/// `‖Σ K_i†K_i - I‖_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Completeness {
    pub complete: bool,
    pub defect: f64,
}

impl KrausSet {
    pub fn new(ops: Vec<CMat>) -> Result<Self> {
        let first = ops.first().ok_or(QuantumError::EmptySpectrum)?;
        let (dim_out, dim_in) = first.shape();
        for op in &ops {
            if op.shape() != (dim_out, dim_in) {
                return Err(QuantumError::DimensionMismatch {
                    left: op.nrows(),
                    right: dim_out,
                });
            }
        }
        Ok(KrausSet { dim_in, dim_out, ops })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn operators(&self) -> &[CMat] {
        &self.ops
    }

    /// Completeness defect `‖Σ K_i†K_i - I‖_max` and verdict at `tol`.
    pub fn completeness(&self, tol: f64) -> Completeness {
        let mut acc = CMat::zeros(self.dim_in, self.dim_in);
        for op in &self.ops {
            acc += op.adjoint() * op;
        }
        let defect = linalg::identity_defect(&acc);
        Completeness { complete: defect <= tol, defect }
    }

    /// `Σ K_i M K_i†` on a raw matrix, without validation.
    pub fn apply_raw(&self, m: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim_out, self.dim_out);
        for op in &self.ops {
            out += op * m * op.adjoint();
        }
        out
    }
}

/// Apply a complete Kraus set to a state: `ρ ↦ Σ K_i ρ K_i†`.
///
/// Requires matching dimensions and completeness within `tol.comp_tol`; the
/// output is validated as a density matrix before being returned.
pub fn apply_channel(kraus: &KrausSet, rho: &DensityMatrix, tol: &ToleranceSet) -> Result<DensityMatrix> {
    if kraus.dim_in() != rho.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: kraus.dim_in(),
            right: rho.dim(),
        });
    }
    let completeness = kraus.completeness(tol.comp_tol);
    if !completeness.complete {
        return Err(QuantumError::IncompleteKraus { defect: completeness.defect });
    }
    DensityMatrix::new(kraus.apply_raw(rho.matrix()), tol)
}

// ---------------------------------------------------------------------------
// Energy conservation
// ---------------------------------------------------------------------------

/// One eigenvalue of a Hamiltonian together with the basis indices spanning
/// its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    pub energy: f64,
    pub indices: Vec<usize>,
}

/// Outcome of an energy-conservation check: verdict plus the largest matrix
/// element coupling distinct eigenvalue blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffBlockCheck {
    pub conserving: bool,
    pub max_offblock: f64,
}

/// Check that `u` couples only basis states of equal energy: every element
/// `⟨block_a| U |block_b⟩` with distinct energies must vanish within `tol`.
///
/// The levels must partition `0..dim` and have pairwise distinct energies
/// beyond `gap_tol`.
pub fn check_energy_conserving(
    u: &UnitaryMatrix,
    levels: &[EnergyLevel],
    tol: f64,
    gap_tol: f64,
) -> Result<OffBlockCheck> {
    let dim = u.dim();
    let mut seen = vec![false; dim];
    for level in levels {
        for &idx in &level.indices {
            if idx >= dim {
                return Err(QuantumError::BadPartition {
                    reason: format!("index {idx} out of range for dimension {dim}"),
                });
            }
            if seen[idx] {
                return Err(QuantumError::BadPartition {
                    reason: format!("index {idx} appears in two levels"),
                });
            }
            seen[idx] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(QuantumError::BadPartition {
            reason: "levels do not cover every basis index".into(),
        });
    }
    for a in 0..levels.len() {
        for b in (a + 1)..levels.len() {
            if (levels[a].energy - levels[b].energy).abs() <= gap_tol {
                return Err(QuantumError::BadPartition {
                    reason: format!(
                        "levels {a} and {b} have indistinguishable energies"
                    ),
                });
            }
        }
    }
    let mut block_of = vec![0usize; dim];
    for (b, level) in levels.iter().enumerate() {
        for &idx in &level.indices {
            block_of[idx] = b;
        }
    }
    let mut worst = 0.0f64;
    let m = u.matrix();
    for r in 0..dim {
        for c in 0..dim {
            if block_of[r] != block_of[c] {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    Ok(OffBlockCheck { conserving: worst <= tol, max_offblock: worst })
}

// ---------------------------------------------------------------------------
// Small constructors shared by tests and the oracle module
// ---------------------------------------------------------------------------

/// `|j⟩⟨k|` matrix unit of dimension `d`.
pub fn matrix_unit(d: usize, j: usize, k: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(j, k)] = C64::new(1.0, 0.0);
    m
}

/// Diagonal matrix from complex entries.
pub fn diagonal_matrix(entries: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tols() -> ToleranceSet {
        ToleranceSet::default()
    }

    fn plus_state() -> DensityMatrix {
        let m = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        DensityMatrix::new(m, &tols()).unwrap()
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let m = CMat::identity(3, 3).scale(1.0 / 3.0);
        assert!(DensityMatrix::new(m, &tols()).is_ok());
    }

    #[test]
    fn plus_state_is_valid() {
        plus_state();
    }

    #[test]
    fn overcoherent_matrix_is_not_psd() {
        // Eigenvalues (1 ± 1.2)/2; one negative.
        let m = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.6, 0.0), c(0.6, 0.0), c(0.5, 0.0)]);
        match DensityMatrix::new(m, &tols()) {
            Err(QuantumError::NotPsd { min_eigenvalue }) => {
                assert!((min_eigenvalue - (-0.1)).abs() < 1e-12);
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn psd_witness_on_identity() {
        let h = HermitianMatrix::new(CMat::identity(3, 3), 1e-10).unwrap();
        let w = h.psd_witness(1e-9);
        assert!(w.psd);
        assert!((w.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psd_witness_boundary_rank_deficient() {
        let h = HermitianMatrix::new(diagonal_matrix(&[c(1.0, 0.0), c(0.0, 0.0)]), 1e-10).unwrap();
        let w = h.psd_witness(1e-9);
        assert!(w.psd);
        assert!(w.min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn psd_witness_indefinite_by_hand() {
        // [[1,2],[2,1]] has eigenvalues 3 and -1.
        let h = HermitianMatrix::new(
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]),
            1e-10,
        )
        .unwrap();
        let w = h.psd_witness(1e-9);
        assert!(!w.psd);
        assert!((w.min_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_vectors_identity_gives_orthonormal_pair() {
        let h = HermitianMatrix::new(CMat::identity(2, 2), 1e-10).unwrap();
        let vs = h.gram_vectors(1e-9).unwrap();
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[0].len(), 2);
        assert!(linalg::inner(&vs[0], &vs[1]).norm() < 1e-12);
        assert!((linalg::inner(&vs[0], &vs[0]).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_vectors_all_ones_is_rank_one() {
        let h = HermitianMatrix::new(CMat::from_element(3, 3, c(1.0, 0.0)), 1e-10).unwrap();
        let vs = h.gram_vectors(1e-9).unwrap();
        assert_eq!(vs[0].len(), 1);
        for v in &vs {
            assert!((linalg::inner(v, v).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_vectors_round_trip_half_overlap() {
        let h = HermitianMatrix::new(
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)]),
            1e-10,
        )
        .unwrap();
        let vs = h.gram_vectors(1e-9).unwrap();
        let g = gramian_of(&vs, 1e-10).unwrap();
        assert!(linalg::max_abs_diff(g.matrix(), h.matrix()) < 1e-12);
    }

    #[test]
    fn gram_vectors_rejects_indefinite() {
        let h = HermitianMatrix::new(
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]),
            1e-10,
        )
        .unwrap();
        assert!(matches!(h.gram_vectors(1e-9), Err(QuantumError::NotPsd { .. })));
    }

    #[test]
    fn identity_kraus_preserves_states() {
        let k = KrausSet::new(vec![CMat::identity(2, 2)]).unwrap();
        let rho = plus_state();
        let out = apply_channel(&k, &rho, &tols()).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn ground_pumping_kraus_by_hand() {
        // K = {|E_1⟩⟨E_1|, |E_1⟩⟨E_2|} sends the plus state to |E_1⟩⟨E_1|:
        // each term contributes ½|E_1⟩⟨E_1|.
        let k = KrausSet::new(vec![matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)]).unwrap();
        let out = apply_channel(&k, &plus_state(), &tols()).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), &matrix_unit(2, 0, 0)) < 1e-15);
    }

    #[test]
    fn incomplete_kraus_is_rejected() {
        let k = KrausSet::new(vec![diagonal_matrix(&[c(1.0, 0.0), c(0.0, 0.0)])]).unwrap();
        let check = k.completeness(1e-9);
        assert!(!check.complete);
        assert!((check.defect - 1.0).abs() < 1e-15);
        assert!(matches!(
            apply_channel(&k, &plus_state(), &tols()),
            Err(QuantumError::IncompleteKraus { .. })
        ));
    }

    #[test]
    fn spectrum_validation_cases() {
        assert!(EnergySpectrum::new(vec![0.0, 1.0, 2.5], 1e-9).is_ok());
        assert!(matches!(
            EnergySpectrum::new(vec![0.0, 1.0, 2.0], 1e-9),
            Err(QuantumError::DegenerateGaps { .. })
        ));
        assert!(matches!(
            EnergySpectrum::new(vec![0.0, 1.0, 1.0], 1e-9),
            Err(QuantumError::DegenerateLevels { i: 2, j: 3 })
        ));
    }

    #[test]
    fn energy_conservation_blocks() {
        // Block-diagonal U w.r.t. the partition {0,1},{2}: conserving.
        let mut m = CMat::zeros(3, 3);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(1.0, 0.0);
        m[(2, 2)] = c(1.0, 0.0);
        let u = UnitaryMatrix::new(m, 1e-9).unwrap();
        let levels = vec![
            EnergyLevel { energy: 0.0, indices: vec![0, 1] },
            EnergyLevel { energy: 1.0, indices: vec![2] },
        ];
        let check = check_energy_conserving(&u, &levels, 1e-9, 1e-9).unwrap();
        assert!(check.conserving);
        assert_eq!(check.max_offblock, 0.0);

        // Swap across blocks: maximally violating.
        let mut s = CMat::zeros(3, 3);
        s[(0, 0)] = c(1.0, 0.0);
        s[(1, 2)] = c(1.0, 0.0);
        s[(2, 1)] = c(1.0, 0.0);
        let u = UnitaryMatrix::new(s, 1e-9).unwrap();
        let check = check_energy_conserving(&u, &levels, 1e-9, 1e-9).unwrap();
        assert!(!check.conserving);
        assert!((check.max_offblock - 1.0).abs() < 1e-15);
    }

    #[test]
    fn energy_conservation_rejects_bad_partition() {
        let u = UnitaryMatrix::new(CMat::identity(2, 2), 1e-9).unwrap();
        let levels = vec![EnergyLevel { energy: 0.0, indices: vec![0] }];
        assert!(matches!(
            check_energy_conserving(&u, &levels, 1e-9, 1e-9),
            Err(QuantumError::BadPartition { .. })
        ));
    }

    #[test]
    fn energy_conservation_invariant_under_in_block_rotation() {
        // Rotating within a block must not change the off-block maximum.
        let levels = vec![
            EnergyLevel { energy: 0.0, indices: vec![0, 1] },
            EnergyLevel { energy: 2.0, indices: vec![2] },
        ];
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = c(0.6, 0.0);
        m[(0, 1)] = c(0.8, 0.0);
        m[(1, 0)] = c(-0.8, 0.0);
        m[(1, 1)] = c(0.6, 0.0);
        m[(2, 2)] = c(0.0, 1.0);
        let u = UnitaryMatrix::new(m.clone(), 1e-9).unwrap();
        let before = check_energy_conserving(&u, &levels, 1e-9, 1e-9).unwrap();

        let theta = 0.3f64;
        let mut rot = CMat::identity(3, 3);
        rot[(0, 0)] = c(theta.cos(), 0.0);
        rot[(0, 1)] = c(theta.sin(), 0.0);
        rot[(1, 0)] = c(-theta.sin(), 0.0);
        rot[(1, 1)] = c(theta.cos(), 0.0);
        let u_rot = UnitaryMatrix::new(rot * m, 1e-9).unwrap();
        let after = check_energy_conserving(&u_rot, &levels, 1e-9, 1e-9).unwrap();
        assert!((before.max_offblock - after.max_offblock).abs() < 1e-12);
        assert!(before.conserving && after.conserving);
    }

    #[test]
    fn max_abs_of_density() {
        assert!((linalg::max_abs(plus_state().matrix()) - 0.5).abs() < 1e-15);
    }
}
