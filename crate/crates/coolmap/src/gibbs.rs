//! Low-temperature Gibbs-preserving operations: channels fixing the ground
//! projector `|E_1⟩⟨E_1|`.
//!
//! States are handled through the canonical parametrization
//! `ρ = [[α, x†],[x, A]]`. Two quantities are monotonically non-increasing
//! under every such channel: the informational nonequilibrium `ν_I = 1 - α`
//! and the coherence-aware `ν_C = 1 - c_ρ`, where `c_ρ = α - x†A⁻¹x` is the
//! Schur complement of the block `A`. The pair `(β ≥ α, c_σ ≥ c_ρ)` is
//! necessary for any transition `ρ ↦ σ`, and sufficient on two-level
//! systems and between pure states — for which this module also builds the
//! channel explicitly.

use thiserror::Error;

use crate::linalg::{self, CMat, CVec, C64};
use crate::quantum::{DensityMatrix, KrausSet, QuantumError, UnitaryMatrix};
use crate::tol::ToleranceSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GibbsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("x has weight {weight:.3e} outside the support of A; the state is not PSD")]
    SupportViolation { weight: f64 },
    #[error("Kraus set violates the ground-fixing block structure: {reason}")]
    InvalidGpKraus { reason: String },
    #[error("necessary conditions fail: margins β-α = {alpha_margin:.3e}, c_σ-c_ρ = {schur_margin:.3e}")]
    NotNecessaryConditions { alpha_margin: f64, schur_margin: f64 },
    #[error("degenerate synthesis: α = {alpha} leaves no room to move")]
    DegenerateEdgeCase { alpha: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, GibbsError>;

// ---------------------------------------------------------------------------
// Canonical parametrization
// ---------------------------------------------------------------------------

/// A state in canonical form: ground population `α`, coherence vector `x`
/// between the ground state and the excited block, and the excited block
/// `A` (Hermitian, PSD, trace `1 - α`).
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalState {
    pub alpha: f64,
    pub x: CVec,
    pub a: CMat,
}

/// Split a state into its canonical parameters
/// `(α, x, A) = (ρ_11, column below, lower-right block)`.
pub fn canonical_params(rho: &DensityMatrix) -> CanonicalState {
    let d = rho.dim();
    let m = rho.matrix();
    let alpha = m[(0, 0)].re;
    let x = CVec::from_iterator(d - 1, (1..d).map(|j| m[(j, 0)]));
    let a = m.view((1, 1), (d - 1, d - 1)).into_owned();
    CanonicalState { alpha, x, a }
}

/// Reassemble the density matrix of a canonical triple.
pub fn assemble_state(c: &CanonicalState, tol: &ToleranceSet) -> Result<DensityMatrix> {
    let d = c.a.nrows() + 1;
    let mut m = CMat::zeros(d, d);
    m[(0, 0)] = C64::new(c.alpha, 0.0);
    for j in 1..d {
        m[(j, 0)] = c.x[j - 1];
        m[(0, j)] = c.x[j - 1].conj();
        for k in 1..d {
            m[(j, k)] = c.a[(j - 1, k - 1)];
        }
    }
    Ok(DensityMatrix::new(m, tol)?)
}

/// Schur complement `c_ρ = α - x†A⁻¹x`, computed on the numerical support
/// of `A` (pseudo-inverse semantics): eigendirections of `A` below
/// `zero_tol` are dropped, and any weight of `x` along them means the input
/// was not PSD, reported as [`GibbsError::SupportViolation`].
pub fn schur_complement(c: &CanonicalState, tol: &ToleranceSet) -> Result<f64> {
    let (eigs, vecs) = linalg::hermitian_eigen(&c.a);
    let norm = eigs.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
    let cut = tol.zero_tol * norm.max(1.0);
    let mut quad = 0.0;
    let mut off_support = 0.0;
    for (i, &w) in eigs.iter().enumerate() {
        let comp = vecs.column(i).dotc(&c.x).norm_sqr();
        if w > cut {
            quad += comp / w;
        } else {
            off_support += comp;
        }
    }
    if off_support.sqrt() > tol.psd_tol.max(1e-12) * 10.0 {
        return Err(GibbsError::SupportViolation { weight: off_support.sqrt() });
    }
    Ok(c.alpha - quad)
}

/// Informational nonequilibrium `ν_I = 1 - α ∈ [0, 1]`; zero exactly on the
/// ground projector.
pub fn nu_i(rho: &DensityMatrix) -> f64 {
    1.0 - canonical_params(rho).alpha
}

/// Coherence-aware nonequilibrium `ν_C = 1 - c_ρ ∈ [0, 1]`; zero exactly on
/// the ground projector.
pub fn nu_c(rho: &DensityMatrix, tol: &ToleranceSet) -> Result<f64> {
    Ok(1.0 - schur_complement(&canonical_params(rho), tol)?)
}

/// Margins of the necessary conditions for `ρ ↦ σ` under Gibbs-preserving
/// operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpMargins {
    pub alpha_margin: f64,
    pub schur_margin: f64,
}

/// Check the necessary conditions `β ≥ α` and `c_σ ≥ c_ρ` within `tol`.
/// Necessary for all dimensions; also sufficient for `d = 2` and for
/// pure-to-pure transitions.
pub fn gp_necessary(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: &ToleranceSet,
    slack: f64,
) -> Result<(bool, GpMargins)> {
    if rho.dim() != sigma.dim() {
        return Err(GibbsError::DimensionMismatch { left: rho.dim(), right: sigma.dim() });
    }
    let cr = canonical_params(rho);
    let cs = canonical_params(sigma);
    let margins = GpMargins {
        alpha_margin: cs.alpha - cr.alpha,
        schur_margin: schur_complement(&cs, tol)? - schur_complement(&cr, tol)?,
    };
    Ok((margins.alpha_margin >= -slack && margins.schur_margin >= -slack, margins))
}

// ---------------------------------------------------------------------------
// Gibbs-preserving Kraus sets
// ---------------------------------------------------------------------------

/// One Kraus operator of the ground-fixing block form
/// `[[η, v†],[0, L]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpKraus {
    pub eta: C64,
    pub v: CVec,
    pub l: CMat,
}

impl GpKraus {
    pub fn to_matrix(&self, dim: usize) -> CMat {
        let mut m = CMat::zeros(dim, dim);
        m[(0, 0)] = self.eta;
        for k in 1..dim {
            m[(0, k)] = self.v[k - 1].conj();
            for j in 1..dim {
                m[(j, k)] = self.l[(j - 1, k - 1)];
            }
        }
        m
    }
}

/// A Kraus decomposition of a low-temperature Gibbs-preserving channel.
/// Trace preservation requires `Σ|η_i|² = 1`, `Σ η_i v_i = 0`, and
/// `Σ (v_i v_i† + L_i†L_i) = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpKrausSet {
    dim: usize,
    ops: Vec<GpKraus>,
}

impl GpKrausSet {
    pub fn new(dim: usize, ops: Vec<GpKraus>) -> Result<Self> {
        if dim < 2 {
            return Err(GibbsError::DimensionMismatch { left: dim, right: 2 });
        }
        for op in &ops {
            if op.v.len() != dim - 1 || op.l.nrows() != dim - 1 || op.l.ncols() != dim - 1 {
                return Err(GibbsError::DimensionMismatch { left: op.v.len(), right: dim - 1 });
            }
        }
        Ok(GpKrausSet { dim, ops })
    }

    /// Read the block form off full matrices, requiring the lower-left
    /// column block to vanish.
    pub fn from_matrices(mats: Vec<CMat>) -> Result<Self> {
        let dim = mats.first().map(|m| m.nrows()).unwrap_or(0);
        let mut ops = Vec::with_capacity(mats.len());
        for m in &mats {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(GibbsError::DimensionMismatch { left: m.nrows(), right: dim });
            }
            for j in 1..dim {
                if m[(j, 0)].norm() > 1e-12 {
                    return Err(GibbsError::InvalidGpKraus {
                        reason: format!(
                            "entry ({j},0) = {:.3e} breaks the ground-fixing form",
                            m[(j, 0)].norm()
                        ),
                    });
                }
            }
            ops.push(GpKraus {
                eta: m[(0, 0)],
                v: CVec::from_iterator(dim - 1, (1..dim).map(|k| m[(0, k)].conj())),
                l: m.view((1, 1), (dim - 1, dim - 1)).into_owned(),
            });
        }
        GpKrausSet::new(dim, ops)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[GpKraus] {
        &self.ops
    }

    pub fn to_kraus_set(&self) -> KrausSet {
        KrausSet::new(self.ops.iter().map(|op| op.to_matrix(self.dim)).collect())
            .expect("block matrices share one shape")
    }

    /// Largest violation of the trace-preservation constraints.
    pub fn tp_defect(&self) -> f64 {
        let dm1 = self.dim - 1;
        let mut eta_norm = 0.0;
        let mut eta_v = CVec::zeros(dm1);
        let mut block = CMat::zeros(dm1, dm1);
        for op in &self.ops {
            eta_norm += op.eta.norm_sqr();
            eta_v += &op.v * op.eta;
            block += &op.v * op.v.adjoint() + op.l.adjoint() * &op.l;
        }
        let mut defect = (eta_norm - 1.0).abs();
        defect = defect.max(eta_v.iter().map(|z| z.norm()).fold(0.0, f64::max));
        defect.max(linalg::identity_defect(&block))
    }

    pub fn validate(&self, comp_tol: f64) -> Result<()> {
        let defect = self.tp_defect();
        if defect > comp_tol {
            return Err(GibbsError::InvalidGpKraus {
                reason: format!("trace-preservation defect {defect:.3e}"),
            });
        }
        Ok(())
    }

    /// Apply the channel through the canonical block formulas
    /// `β = α + Σ v_i†A v_i`, `y = (Σ η̄_i L_i)x + Σ L_i A v_i`,
    /// `B = Σ L_i A L_i†`, and validate the assembled state.
    pub fn apply(&self, rho: &DensityMatrix, tol: &ToleranceSet) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(GibbsError::DimensionMismatch { left: rho.dim(), right: self.dim });
        }
        self.validate(tol.comp_tol)?;
        let c = canonical_params(rho);
        let dm1 = self.dim - 1;
        let mut beta = c.alpha;
        let mut y = CVec::zeros(dm1);
        let mut b = CMat::zeros(dm1, dm1);
        let mut eta_l = CMat::zeros(dm1, dm1);
        for op in &self.ops {
            beta += (op.v.adjoint() * &c.a * &op.v)[(0, 0)].re;
            y += &op.l * &c.a * &op.v;
            b += &op.l * &c.a * op.l.adjoint();
            eta_l += &op.l * op.eta.conj();
        }
        y += eta_l * &c.x;
        assemble_state(&CanonicalState { alpha: beta, x: y, a: b }, tol)
    }
}

// ---------------------------------------------------------------------------
// Two-level synthesis
// ---------------------------------------------------------------------------

/// Build a Gibbs-preserving channel taking qubit `ρ` to qubit `σ`, which
/// exists exactly when the necessary conditions hold.
///
/// Internally works in the gauge where both coherences are real and
/// nonnegative (reachable by allowed diagonal-phase unitaries on both
/// ends). Three Kraus operators built from vectors `η = e_1`,
/// `v = ‖v‖ e_2`, `λ = ‖λ‖(cosθ ŵ + sinθ e_3)` with
/// `w = x η + (1-α) v` realize any admissible pair `(β, c_σ)`:
/// `‖v‖² = (β-α)/(1-α)` pins `β`, and the interpolation angle solves
/// `cos²θ = (β - c_σ)(1-α)/‖w‖²` in closed form — parallel `λ` keeps
/// `c_σ = c_ρ`, orthogonal `λ` reaches `c_σ = β`.
pub fn synthesize_gp_two_level(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: &ToleranceSet,
) -> Result<GpKrausSet> {
    if rho.dim() != 2 || sigma.dim() != 2 {
        return Err(GibbsError::DimensionMismatch { left: rho.dim(), right: 2 });
    }
    let (ok, margins) = gp_necessary(rho, sigma, tol, 1e-9)?;
    if !ok {
        return Err(GibbsError::NotNecessaryConditions {
            alpha_margin: margins.alpha_margin,
            schur_margin: margins.schur_margin,
        });
    }

    let alpha = canonical_params(rho).alpha;
    let beta_target = canonical_params(sigma).alpha;
    let x_complex = rho.matrix()[(0, 1)];
    let y_complex = sigma.matrix()[(0, 1)];
    let x = x_complex.norm();

    // Ground state in, ground state out: the identity channel does it.
    if alpha >= 1.0 - tol.zero_tol.max(1e-12) {
        if beta_target >= 1.0 - 1e-9 {
            return GpKrausSet::new(
                2,
                vec![GpKraus {
                    eta: C64::new(1.0, 0.0),
                    v: CVec::zeros(1),
                    l: CMat::identity(1, 1),
                }],
            );
        }
        return Err(GibbsError::DegenerateEdgeCase { alpha });
    }

    let one_minus_alpha = 1.0 - alpha;
    let c_sigma = if beta_target >= 1.0 - tol.zero_tol.max(1e-12) {
        1.0
    } else {
        beta_target - y_complex.norm_sqr() / (1.0 - beta_target)
    };

    let v_norm_sq = ((beta_target - alpha) / one_minus_alpha).clamp(0.0, 1.0);
    let v_norm = v_norm_sq.sqrt();
    let lambda_norm_sq = 1.0 - v_norm_sq;
    let lambda_norm = lambda_norm_sq.sqrt();

    // w = x·e_1 + (1-α)‖v‖·e_2 in the 3-dimensional Kraus index space.
    let w = [x, one_minus_alpha * v_norm, 0.0];
    let w_norm_sq = w[0] * w[0] + w[1] * w[1];
    let cos_sq = if w_norm_sq > 0.0 {
        ((beta_target - c_sigma).max(0.0) * one_minus_alpha / w_norm_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let cos_theta = cos_sq.sqrt();
    let sin_theta = (1.0 - cos_sq).max(0.0).sqrt();
    let lambda = if w_norm_sq > 0.0 {
        let w_norm = w_norm_sq.sqrt();
        [
            lambda_norm * (cos_theta * w[0] / w_norm),
            lambda_norm * (cos_theta * w[1] / w_norm),
            lambda_norm * sin_theta,
        ]
    } else {
        [lambda_norm, 0.0, 0.0]
    };
    let v_vec = [0.0, v_norm, 0.0];
    let eta = [1.0, 0.0, 0.0];

    // Assemble in the real gauge, then conjugate by the diagonal phases
    // aligning the actual coherences of ρ and σ.
    let phase_rho = if x > 0.0 { x_complex / x } else { C64::new(1.0, 0.0) };
    let phase_sigma = if y_complex.norm() > 0.0 {
        y_complex / y_complex.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let mut ops = Vec::with_capacity(3);
    for i in 0..3 {
        // K̃_i = [[η_i, ṽ_i],[0, λ̃_i]] in the real gauge;
        // K_i = D_σ† K̃_i D_ρ with D = diag(1, phase) preserves the block
        // form, multiplying the (0,1) entry by phase_ρ and L by
        // phase_ρ · conj(phase_σ). The stored v is the conjugate of the
        // (0,1) entry.
        let eta_i = C64::new(eta[i], 0.0);
        let v_i = C64::new(v_vec[i], 0.0) * phase_rho.conj();
        let l_i = C64::new(lambda[i], 0.0) * phase_rho * phase_sigma.conj();
        ops.push(GpKraus {
            eta: eta_i,
            v: CVec::from_column_slice(&[v_i]),
            l: CMat::from_element(1, 1, l_i),
        });
    }
    let set = GpKrausSet::new(2, ops)?;
    set.validate(tol.comp_tol)?;
    Ok(set)
}

// ---------------------------------------------------------------------------
// Pure-state reduction
// ---------------------------------------------------------------------------

/// Rotate the excited-space component of a unit vector onto `|E_2⟩` with an
/// allowed block unitary `1 ⊕ V`, returning the two-level representative
/// `(t, √(1-|t|²))` and the full aligning unitary.
pub fn reduce_pure(psi: &CVec, unit_tol: f64) -> (C64, f64, UnitaryMatrix) {
    let d = psi.len();
    let t = psi[0];
    let excited = CVec::from_iterator(d - 1, (1..d).map(|j| psi[j]));
    let s = excited.norm();
    let mut v = CMat::identity(d - 1, d - 1);
    if s > 1e-14 {
        // Build an orthonormal basis {w_a} starting from the normalized
        // excited component; row a of V is conj(w_a), so Vφ = s·e_1.
        let mut basis: Vec<CVec> = vec![&excited / C64::new(s, 0.0)];
        for cand_idx in 0..d - 1 {
            if basis.len() == d - 1 {
                break;
            }
            let mut cand = CVec::zeros(d - 1);
            cand[cand_idx] = C64::new(1.0, 0.0);
            for w in &basis {
                let overlap = w.dotc(&cand);
                cand -= w * overlap;
            }
            let norm = cand.norm();
            if norm > 1e-10 {
                basis.push(cand / C64::new(norm, 0.0));
            }
        }
        for (r, w) in basis.iter().enumerate() {
            for c in 0..d - 1 {
                v[(r, c)] = w[c].conj();
            }
        }
    }
    let mut full = CMat::identity(d, d);
    for r in 0..d - 1 {
        for c in 0..d - 1 {
            full[(r + 1, c + 1)] = v[(r, c)];
        }
    }
    let unitary = UnitaryMatrix::new(full, unit_tol.max(1e-9))
        .expect("Gram-Schmidt rows are orthonormal");
    (t, s, unitary)
}
