//! Feasibility of state transitions under cooling maps, with explicit
//! certificates and Kraus synthesis.
//!
//! A cooling map is a channel whose Kraus decomposition consists of `n ≤ d`
//! diagonal operators `K_i = Σ_j λ_j^{(i)} |E_j⟩⟨E_j|` plus strictly
//! upper-triangular rank-1 operators `J_{jk} = μ_{jk} |E_j⟩⟨E_k|`, `j < k`.
//! A transition `ρ ↦ σ` is feasible exactly when the diagonal of `ρ`
//! UT-majorizes that of `σ` and the certificate matrix `Q` — diagonal
//! `min(σ_jj/ρ_jj, 1)`, off-diagonal `σ_jk/ρ_jk` — is positive-semidefinite.
//! When some entries of `ρ` vanish, `Q` becomes a family with free real
//! entries and feasibility asks for a PSD completion.

use thiserror::Error;

use crate::linalg::{self, CMat, CVec, C64};
use crate::majorization::{
    construct_utcs, ut_majorizes, MajorizationError, ProbabilityVector, UtcsMatrix,
};
use crate::quantum::{
    apply_channel, DensityMatrix, HermitianMatrix, KrausSet, QuantumError,
};
use crate::tol::ToleranceSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoolingError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("zero coherence mismatch at ({row},{col}): ρ entry vanishes but σ entry is {magnitude:.3e}")]
    ZeroCoherenceMismatch { row: usize, col: usize, magnitude: f64 },
    #[error("certificate inconsistent: {reason}")]
    CertificateInconsistent { reason: String },
    #[error(transparent)]
    Majorization(#[from] MajorizationError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, CoolingError>;

// ---------------------------------------------------------------------------
// Cooling maps
// ---------------------------------------------------------------------------

/// A cooling map: `d` vectors `λ_j ∈ ℂ^n` holding the diagonals of the `n`
/// diagonal Kraus operators, plus decay coefficients `μ_{jk}` for `j < k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoolingMap {
    dim: usize,
    n_diag: usize,
    lambda: Vec<CVec>,
    mu: CMat, // strictly upper-triangular
}

impl CoolingMap {
    /// Assemble a map from its λ vectors and strictly upper-triangular μ.
    /// Structure only; completeness is checked by [`CoolingMap::validate`].
    pub fn new(lambda: Vec<CVec>, mu: CMat) -> Result<Self> {
        let dim = lambda.len();
        if mu.nrows() != dim || mu.ncols() != dim {
            return Err(CoolingError::DimensionMismatch { left: mu.nrows(), right: dim });
        }
        let n_diag = lambda.first().map(|l| l.len()).unwrap_or(0);
        for l in &lambda {
            if l.len() != n_diag {
                return Err(CoolingError::DimensionMismatch { left: l.len(), right: n_diag });
            }
        }
        for j in 0..dim {
            for k in 0..=j {
                if mu[(j, k)].norm() != 0.0 {
                    return Err(CoolingError::CertificateInconsistent {
                        reason: format!("μ has a non-strictly-upper entry at ({j},{k})"),
                    });
                }
            }
        }
        Ok(CoolingMap { dim, n_diag, lambda, mu })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_diag(&self) -> usize {
        self.n_diag
    }

    pub fn lambda(&self) -> &[CVec] {
        &self.lambda
    }

    pub fn mu(&self) -> &CMat {
        &self.mu
    }

    /// Gramian `q_jk = ⟨λ_j, λ_k⟩` of the diagonal part.
    pub fn gramian(&self, herm_tol: f64) -> HermitianMatrix {
        crate::quantum::gramian_of(&self.lambda, herm_tol.max(1e-9))
            .expect("a Gramian is Hermitian by construction")
    }

    /// The induced diagonal-action matrix: `P_{j|j} = ⟨λ_j, λ_j⟩`,
    /// `P_{j|k} = |μ_{jk}|²` for `j < k`.
    pub fn induced_utcs(&self, stoch_tol: f64) -> crate::majorization::Result<UtcsMatrix> {
        let d = self.dim;
        let mut p = vec![0.0f64; d * d];
        for j in 0..d {
            p[j * d + j] = linalg::inner(&self.lambda[j], &self.lambda[j]).re;
            for k in j + 1..d {
                p[j * d + k] = self.mu[(j, k)].norm_sqr();
            }
        }
        UtcsMatrix::new(p, d, stoch_tol)
    }

    /// Largest violation of the per-column completeness constraint
    /// `⟨λ_k, λ_k⟩ + Σ_{j<k} |μ_{jk}|² = 1`.
    pub fn completeness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.dim {
            let mut sum = linalg::inner(&self.lambda[k], &self.lambda[k]).re;
            for j in 0..k {
                sum += self.mu[(j, k)].norm_sqr();
            }
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }

    /// Check completeness and that the induced diagonal action is a valid
    /// upper-triangular column-stochastic matrix.
    pub fn validate(&self, tol: &ToleranceSet) -> Result<()> {
        let defect = self.completeness_defect();
        if defect > tol.comp_tol {
            return Err(QuantumError::IncompleteKraus { defect }.into());
        }
        self.induced_utcs(tol.stoch_tol)?;
        Ok(())
    }
}

/// Explicit Kraus operators of a cooling map: `n` diagonal operators plus
/// one `J_{jk} = μ_{jk}|E_j⟩⟨E_k|` per nonzero coefficient.
pub fn kraus_of(map: &CoolingMap) -> KrausSet {
    let d = map.dim;
    let mut ops = Vec::new();
    for i in 0..map.n_diag {
        let diag: Vec<C64> = (0..d).map(|j| map.lambda[j][i]).collect();
        ops.push(crate::quantum::diagonal_matrix(&diag));
    }
    if map.n_diag == 0 {
        // Degenerate but well-formed: all weight in the J operators.
        ops.push(CMat::zeros(d, d));
    }
    for k in 0..d {
        for j in 0..k {
            if map.mu[(j, k)].norm() > 0.0 {
                let mut op = CMat::zeros(d, d);
                op[(j, k)] = map.mu[(j, k)];
                ops.push(op);
            }
        }
    }
    KrausSet::new(ops).expect("cooling-map Kraus operators share one shape")
}

/// Apply a cooling map to a state through its Kraus representation.
pub fn apply_cooling_map(
    map: &CoolingMap,
    rho: &DensityMatrix,
    tol: &ToleranceSet,
) -> Result<DensityMatrix> {
    Ok(apply_channel(&kraus_of(map), rho, tol)?)
}

// ---------------------------------------------------------------------------
// The certificate matrix Q
// ---------------------------------------------------------------------------

/// One position of a `Q` family left free by a vanishing `ρ_jk`, restricted
/// (without loss of generality) to a real value in `[-half_width, half_width]`
/// where `half_width = √(Q_jj Q_kk)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEntry {
    pub row: usize,
    pub col: usize,
    pub half_width: f64,
}

/// A family of candidate certificate matrices: fixed entries plus free
/// positions over their admissible real intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct QFamily {
    dim: usize,
    fixed: CMat,
    free: Vec<FreeEntry>,
}

impl QFamily {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fixed(&self) -> &CMat {
        &self.fixed
    }

    pub fn free(&self) -> &[FreeEntry] {
        &self.free
    }

    /// Materialize a member of the family from values for the free entries.
    pub fn member(&self, values: &[f64]) -> CMat {
        assert_eq!(values.len(), self.free.len());
        let mut q = self.fixed.clone();
        for (entry, &t) in self.free.iter().zip(values) {
            q[(entry.row, entry.col)] = C64::new(t, 0.0);
            q[(entry.col, entry.row)] = C64::new(t, 0.0);
        }
        q
    }
}

/// Either the single certificate matrix of the all-nonzero case or a family
/// with free entries where `ρ` vanishes.
#[derive(Debug, Clone, PartialEq)]
pub enum TransitionQ {
    Single(HermitianMatrix),
    Family(QFamily),
}

/// Build the certificate matrix for `ρ ↦ σ`.
///
/// Checks the zero-pattern condition first: wherever an off-diagonal
/// `ρ_jk` vanishes (within `zero_tol`), `σ_jk` must vanish too, otherwise
/// the transition is immediately infeasible. With all entries of `ρ`
/// nonzero the certificate is the single matrix with diagonal
/// `min(σ_jj/ρ_jj, 1)` and off-diagonal `σ_jk/ρ_jk`; otherwise rows and
/// columns with `ρ_jj ≈ 0` are zeroed and the remaining vanishing positions
/// become free interval-constrained entries.
pub fn build_q(rho: &DensityMatrix, sigma: &DensityMatrix, zero_tol: f64) -> Result<TransitionQ> {
    let d = rho.dim();
    if sigma.dim() != d {
        return Err(CoolingError::DimensionMismatch { left: d, right: sigma.dim() });
    }
    let r = rho.matrix();
    let s = sigma.matrix();
    for j in 0..d {
        for k in 0..d {
            if j != k && r[(j, k)].norm() <= zero_tol && s[(j, k)].norm() > zero_tol {
                return Err(CoolingError::ZeroCoherenceMismatch {
                    row: j,
                    col: k,
                    magnitude: s[(j, k)].norm(),
                });
            }
        }
    }
    let diag_q = |j: usize| -> f64 {
        let rj = r[(j, j)].re;
        if rj > zero_tol {
            (s[(j, j)].re / rj).clamp(0.0, 1.0)
        } else {
            0.0
        }
    };
    let all_nonzero = (0..d).all(|j| (0..d).all(|k| r[(j, k)].norm() > zero_tol));
    if all_nonzero {
        let mut q = CMat::zeros(d, d);
        for j in 0..d {
            q[(j, j)] = C64::new(diag_q(j), 0.0);
            for k in j + 1..d {
                let ratio = s[(j, k)] / r[(j, k)];
                q[(j, k)] = ratio;
                q[(k, j)] = ratio.conj();
            }
        }
        return Ok(TransitionQ::Single(HermitianMatrix::new(q, 1e-9)?));
    }

    let mut fixed = CMat::zeros(d, d);
    let zero_diag: Vec<bool> = (0..d).map(|j| r[(j, j)].re <= zero_tol).collect();
    let mut free = Vec::new();
    for j in 0..d {
        fixed[(j, j)] = C64::new(if zero_diag[j] { 0.0 } else { diag_q(j) }, 0.0);
    }
    for j in 0..d {
        for k in j + 1..d {
            if zero_diag[j] || zero_diag[k] {
                // Whole row/column already zeroed.
                continue;
            }
            if r[(j, k)].norm() > zero_tol {
                let ratio = s[(j, k)] / r[(j, k)];
                fixed[(j, k)] = ratio;
                fixed[(k, j)] = ratio.conj();
            } else {
                let half_width = (fixed[(j, j)].re * fixed[(k, k)].re).sqrt();
                free.push(FreeEntry { row: j, col: k, half_width });
            }
        }
    }
    Ok(TransitionQ::Family(QFamily { dim: d, fixed, free }))
}

/// Search the family for a PSD completion by coordinate ascent on the
/// minimum eigenvalue.
///
/// Starting from the all-zero assignment and from both interval endpoints,
/// each sweep scans every free entry over a grid of `grid` points on its
/// interval and keeps the value maximizing the minimum eigenvalue; up to 20
/// sweeps or until stationary. A returned matrix is PSD within `tol` — a
/// sound certificate. `None` is an incomplete verdict at this resolution,
/// not a proof of infeasibility.
pub fn complete_q_family(family: &QFamily, tol: f64, grid: usize) -> Option<HermitianMatrix> {
    let n = family.free.len();
    let min_eig = |values: &[f64]| -> f64 {
        let q = family.member(values);
        linalg::min_eig_and_norm(&q).0
    };
    let scale = |values: &[f64]| -> f64 {
        let q = family.member(values);
        linalg::min_eig_and_norm(&q).1.max(1.0)
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let starts: Vec<Vec<f64>> = vec![
        vec![0.0; n],
        family.free.iter().map(|f| -f.half_width).collect(),
        family.free.iter().map(|f| f.half_width).collect(),
    ];
    let grid = grid.max(2);
    for start in starts {
        let mut current = start;
        let mut current_eig = min_eig(&current);
        for _sweep in 0..20 {
            let mut improved = false;
            for i in 0..n {
                let hw = family.free[i].half_width;
                let mut local_best = (current_eig, current[i]);
                for step in 0..grid {
                    let t = -hw + 2.0 * hw * (step as f64) / ((grid - 1) as f64);
                    let saved = current[i];
                    current[i] = t;
                    let e = min_eig(&current);
                    current[i] = saved;
                    if e > local_best.0 {
                        local_best = (e, t);
                    }
                }
                if local_best.0 > current_eig {
                    current[i] = local_best.1;
                    current_eig = local_best.0;
                    improved = true;
                }
            }
            if current_eig >= 0.0 || !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(e, _)| current_eig > *e) {
            best = Some((current_eig, current));
        }
    }
    let (eig, values) = best?;
    if eig >= -tol * scale(&values) {
        let q = family.member(&values);
        Some(HermitianMatrix::new(q, 1e-9).expect("family members are Hermitian"))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Decision
// ---------------------------------------------------------------------------

/// The `(P, Q)` pair witnessing feasibility, with the PSD evidence and the
/// Gram vectors of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionCertificate {
    pub p: UtcsMatrix,
    pub q: HermitianMatrix,
    pub min_eig_q: f64,
    pub gram: Vec<CVec>,
}

/// Why a transition is infeasible, with a witness.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ZeroCoherenceMismatch { row: usize, col: usize, magnitude: f64 },
    NotUtMajorized { index: usize },
    QNotPsd { min_eig: f64 },
    NoPsdCompletionFound,
}

/// Outcome of a feasibility decision.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Feasible(Box<TransitionCertificate>),
    Infeasible(Violation),
}

impl Decision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decision::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&TransitionCertificate> {
        match self {
            Decision::Feasible(cert) => Some(cert),
            Decision::Infeasible(_) => None,
        }
    }
}

/// Grid resolution used when a decision has to search a `Q` family.
pub const DEFAULT_COMPLETION_GRID: usize = 33;

/// Decide whether a cooling map taking `ρ` to `σ` exists.
///
/// Conditions are checked cheapest first: the zero pattern, then UT
/// majorization of the diagonals, then positive-semidefiniteness of the
/// certificate matrix (searching the family when `ρ` has vanishing
/// entries). Feasible outcomes carry a full certificate.
pub fn decide_transition(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: &ToleranceSet,
) -> Result<Decision> {
    let d = rho.dim();
    if sigma.dim() != d {
        return Err(CoolingError::DimensionMismatch { left: d, right: sigma.dim() });
    }
    let transition_q = match build_q(rho, sigma, tol.zero_tol) {
        Ok(q) => q,
        Err(CoolingError::ZeroCoherenceMismatch { row, col, magnitude }) => {
            return Ok(Decision::Infeasible(Violation::ZeroCoherenceMismatch {
                row,
                col,
                magnitude,
            }))
        }
        Err(other) => return Err(other),
    };
    let u = ProbabilityVector::new(rho.diagonal(), tol.prob_tol.max(1e-9))?;
    let v = ProbabilityVector::new(sigma.diagonal(), tol.prob_tol.max(1e-9))?;
    let ut = ut_majorizes(&u, &v, tol.stoch_tol)?;
    if !ut.holds {
        return Ok(Decision::Infeasible(Violation::NotUtMajorized {
            index: ut.first_violated_index.unwrap_or(0),
        }));
    }
    let p = construct_utcs(&u, &v)?;
    let q = match transition_q {
        TransitionQ::Single(q) => {
            let witness = q.psd_witness(tol.psd_tol);
            if !witness.psd {
                return Ok(Decision::Infeasible(Violation::QNotPsd {
                    min_eig: witness.min_eigenvalue,
                }));
            }
            q
        }
        TransitionQ::Family(family) => {
            match complete_q_family(&family, tol.psd_tol, DEFAULT_COMPLETION_GRID) {
                None => return Ok(Decision::Infeasible(Violation::NoPsdCompletionFound)),
                Some(completed) => {
                    // Zeroed rows forced the corresponding diagonal of the
                    // family to 0; lift it back to the diagonal of P (adding
                    // a nonnegative diagonal preserves PSD) so the
                    // certificate pair stays consistent for synthesis.
                    let mut m = completed.matrix().clone();
                    for j in 0..d {
                        let pj = p.entry(j, j);
                        if m[(j, j)].re < pj {
                            m[(j, j)] = C64::new(pj, 0.0);
                        }
                    }
                    HermitianMatrix::new(m, 1e-9)?
                }
            }
        }
    };
    let witness = q.psd_witness(tol.psd_tol);
    let gram = q.gram_vectors(tol.psd_tol)?;
    Ok(Decision::Feasible(Box::new(TransitionCertificate {
        p,
        q,
        min_eig_q: witness.min_eigenvalue,
        gram,
    })))
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

/// Check that a certificate is internally consistent: `P` diagonal matches
/// `Q` diagonal and the Gram vectors reproduce `Q`.
fn check_certificate(cert: &TransitionCertificate) -> Result<()> {
    let d = cert.p.dim();
    if cert.q.dim() != d || cert.gram.len() != d {
        return Err(CoolingError::CertificateInconsistent {
            reason: "P, Q and the Gram vectors disagree on the dimension".into(),
        });
    }
    for j in 0..d {
        let diff = (cert.p.entry(j, j) - cert.q.matrix()[(j, j)].re).abs();
        if diff > 1e-9 {
            return Err(CoolingError::CertificateInconsistent {
                reason: format!("P and Q diagonals differ by {diff:.3e} at {j}"),
            });
        }
    }
    let g = crate::quantum::gramian_of(&cert.gram, 1e-9)?;
    let diff = linalg::max_abs_diff(g.matrix(), cert.q.matrix());
    if diff > 1e-8 {
        return Err(CoolingError::CertificateInconsistent {
            reason: format!("Gram vectors reproduce Q only within {diff:.3e}"),
        });
    }
    Ok(())
}

/// Synthesize an explicit cooling map from a feasibility certificate:
/// `λ_j` are the Gram vectors of `Q` and `μ_{jk} = √P_{j|k}` for `j < k`
/// (phases fixed to zero — only `|μ_{jk}|²` is observable).
pub fn synthesize_cooling_map(cert: &TransitionCertificate) -> Result<CoolingMap> {
    check_certificate(cert)?;
    let d = cert.p.dim();
    let mut mu = CMat::zeros(d, d);
    for k in 0..d {
        for j in 0..k {
            mu[(j, k)] = C64::new(cert.p.entry(j, k).max(0.0).sqrt(), 0.0);
        }
    }
    CoolingMap::new(cert.gram.clone(), mu)
}

// ---------------------------------------------------------------------------
// Coherence transfer
// ---------------------------------------------------------------------------

/// The state with the largest possible off-diagonal magnitudes among all
/// cooling-map images of `ρ` with diagonal `v`: `σ_jj = v_j` and
/// `σ_jk = √(Q_jj Q_kk) ρ_jk` with `Q_jj = min(v_j/ρ_jj, 1)`. Its
/// certificate matrix is rank 1, so it is reachable by an optimally
/// coherent process.
pub fn max_coherent_target(
    rho: &DensityMatrix,
    v: &ProbabilityVector,
    tol: &ToleranceSet,
) -> Result<DensityMatrix> {
    let d = rho.dim();
    if v.dim() != d {
        return Err(CoolingError::DimensionMismatch { left: d, right: v.dim() });
    }
    let u = ProbabilityVector::new(rho.diagonal(), tol.prob_tol.max(1e-9))?;
    let ut = ut_majorizes(&u, v, tol.stoch_tol)?;
    if !ut.holds {
        return Err(MajorizationError::NotUtMajorized {
            index: ut.first_violated_index.unwrap_or(0),
            violation: 0.0,
        }
        .into());
    }
    let r = rho.matrix();
    let s_factor: Vec<f64> = (0..d)
        .map(|j| {
            let rj = r[(j, j)].re;
            if rj > tol.zero_tol {
                (v.weights()[j] / rj).clamp(0.0, 1.0).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut out = CMat::zeros(d, d);
    for j in 0..d {
        out[(j, j)] = C64::new(v.weights()[j], 0.0);
        for k in 0..d {
            if j != k {
                out[(j, k)] = r[(j, k)] * (s_factor[j] * s_factor[k]);
            }
        }
    }
    Ok(DensityMatrix::new(out, tol)?)
}

/// Verify the Cauchy–Schwarz coherence transfer bound on a map's action:
/// `|σ_jk| ≤ √(P_jj P_kk) |ρ_jk| + 1e-10` for all `j ≠ k`, where
/// `σ` is the image of `ρ` and `P` is the map's induced diagonal action.
pub fn coherence_bound_check(
    map: &CoolingMap,
    rho: &DensityMatrix,
    tol: &ToleranceSet,
) -> Result<bool> {
    let sigma = apply_cooling_map(map, rho, tol)?;
    let p = map.induced_utcs(tol.stoch_tol)?;
    let d = map.dim();
    let r = rho.matrix();
    let s = sigma.matrix();
    for j in 0..d {
        for k in 0..d {
            if j == k {
                continue;
            }
            let bound = (p.entry(j, j).max(0.0) * p.entry(k, k).max(0.0)).sqrt() * r[(j, k)].norm();
            if s[(j, k)].norm() > bound + 1e-10 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
