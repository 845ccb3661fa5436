//! Realize cooling maps as genuine low-temperature thermal operations: an
//! ancilla prepared in its ground space, a global energy-conserving unitary
//! on the joint system, and a partial trace.
//!
//! An optimally coherent map (rank-1 Gramian, one diagonal Kraus operator)
//! dilates with a non-degenerate ancilla ground level; a rational mixture
//! `Σ (m_i/g) E_i` of optimally coherent maps uses a `g`-fold degenerate
//! ground level, each ground vector driving one component map. On qubits
//! every feasible transition dilates, including the rank-2 case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cooling::{
    self, decide_transition, synthesize_cooling_map, CoolingError, CoolingMap, Decision,
};
use crate::linalg::{self, CMat, CVec, C64};
use crate::quantum::{
    check_energy_conserving, DensityMatrix, EnergyLevel, EnergySpectrum, HermitianMatrix,
    KrausSet, QuantumError, UnitaryMatrix,
};
use crate::tol::ToleranceSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DilationError {
    #[error("map is not optimally coherent (Gramian rank {rank})")]
    NotOptimallyCoherent { rank: usize },
    #[error("map completeness defect {defect:.3e} exceeds tolerance")]
    CompletenessDefect { defect: f64 },
    #[error("mixture weights sum to {num}/{den}, not 1")]
    WeightsNotNormalized { num: u64, den: u64 },
    #[error("mixture is empty or weights have zero denominators")]
    BadWeights,
    #[error("maps in a mixture must share one dimension: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unitary completion failed: {reason}")]
    CompletionFailed { reason: String },
    #[error(transparent)]
    Cooling(#[from] CoolingError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, DilationError>;

// ---------------------------------------------------------------------------
// Ancilla spectra
// ---------------------------------------------------------------------------

/// One excited ancilla level, resonant with a system pair: its energy above
/// the ancilla ground level equals `E_k - E_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitedLevel {
    /// Energy above the ancilla ground level (which sits at 0 by gauge).
    pub energy: f64,
    /// The system pair `(j, k)`, `j < k`, this level absorbs.
    pub pair: (usize, usize),
    pub multiplicity: usize,
}

/// Ancilla spectrum of a dilation: a `g`-fold degenerate ground level at
/// energy 0 plus one excited level per system pair `j < k`, each with
/// multiplicity `g`. Distinctness of the excited energies is inherited from
/// the generic gaps of the system spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaSpec {
    pub ground_multiplicity: usize,
    pub excited: Vec<ExcitedLevel>,
}

impl AncillaSpec {
    /// Build the ancilla for a given system spectrum and ground multiplicity.
    pub fn for_system(spectrum: &EnergySpectrum, g: usize) -> Self {
        let e = spectrum.energies();
        let d = e.len();
        let mut excited = Vec::with_capacity(d * (d - 1) / 2);
        for k in 0..d {
            for j in 0..k {
                excited.push(ExcitedLevel {
                    energy: e[k] - e[j],
                    pair: (j, k),
                    multiplicity: g,
                });
            }
        }
        AncillaSpec { ground_multiplicity: g, excited }
    }

    pub fn dim(&self) -> usize {
        self.ground_multiplicity + self.excited.iter().map(|l| l.multiplicity).sum::<usize>()
    }

    /// Basis index of ground vector `t`.
    pub fn ground_index(&self, t: usize) -> usize {
        t
    }

    /// Basis index of copy `t` of the excited level for `pair`.
    pub fn excited_index(&self, pair: (usize, usize), t: usize) -> usize {
        let mut offset = self.ground_multiplicity;
        for level in &self.excited {
            if level.pair == pair {
                return offset + t;
            }
            offset += level.multiplicity;
        }
        unreachable!("pair {pair:?} is not part of this ancilla");
    }

    /// Energy of each ancilla basis index.
    pub fn energies(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        let mut offset = self.ground_multiplicity;
        for level in &self.excited {
            for t in 0..level.multiplicity {
                out[offset + t] = level.energy;
            }
            offset += level.multiplicity;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Thermal dilations
// ---------------------------------------------------------------------------

/// An explicit thermal-operation realization: system spectrum, ancilla
/// spectrum, and the global energy-conserving unitary. The ancilla state is
/// the uniform mixture over its ground vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalDilation {
    pub system: EnergySpectrum,
    pub ancilla: AncillaSpec,
    pub unitary: UnitaryMatrix,
}

impl ThermalDilation {
    pub fn joint_dim(&self) -> usize {
        self.system.dim() * self.ancilla.dim()
    }

    /// Joint basis index of `|E_j⟩ ⊗ |ancilla b⟩` (system-major layout).
    pub fn joint_index(&self, system: usize, ancilla: usize) -> usize {
        system * self.ancilla.dim() + ancilla
    }

    /// Joint energy levels, clustered within `gap_tol`, as a partition of
    /// the joint basis.
    pub fn joint_levels(&self, gap_tol: f64) -> Vec<EnergyLevel> {
        let sys = self.system.energies();
        let anc = self.ancilla.energies();
        let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(self.joint_dim());
        for (s, &es) in sys.iter().enumerate() {
            for (a, &ea) in anc.iter().enumerate() {
                pairs.push((es + ea, self.joint_index(s, a)));
            }
        }
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut levels: Vec<EnergyLevel> = Vec::new();
        for (energy, idx) in pairs {
            match levels.last_mut() {
                Some(level) if (energy - level.energy).abs() <= gap_tol => {
                    level.indices.push(idx);
                }
                _ => levels.push(EnergyLevel { energy, indices: vec![idx] }),
            }
        }
        levels
    }

    /// The channel induced on the system: `ρ ↦ Tr_A[U(ρ⊗γ_A)U†]` with
    /// `γ_A` the uniform ground mixture, evaluated through the ground-block
    /// slices of `U` so it stays cheap on large joint spaces.
    pub fn apply_raw(&self, rho: &CMat) -> CMat {
        let d = self.system.dim();
        let a_dim = self.ancilla.dim();
        let g = self.ancilla.ground_multiplicity;
        let u = self.unitary.matrix();
        let mut out = CMat::zeros(d, d);
        for t in 0..g {
            // W_t = U (I_S ⊗ |ground t⟩): joint_dim × d slice.
            let mut w = CMat::zeros(d * a_dim, d);
            for s in 0..d {
                let col = self.joint_index(s, self.ancilla.ground_index(t));
                w.set_column(s, &u.column(col));
            }
            let evolved = &w * rho * w.adjoint();
            // Partial trace over the ancilla.
            for r in 0..d {
                for c in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..a_dim {
                        acc += evolved[(self.joint_index(r, b), self.joint_index(c, b))];
                    }
                    out[(r, c)] += acc;
                }
            }
        }
        out / C64::new(g as f64, 0.0)
    }

    pub fn apply(&self, rho: &DensityMatrix, tol: &ToleranceSet) -> Result<DensityMatrix> {
        Ok(DensityMatrix::new(self.apply_raw(rho.matrix()), tol)?)
    }
}

// ---------------------------------------------------------------------------
// Rank and optimality
// ---------------------------------------------------------------------------

/// Numerical rank of a certificate matrix: eigenvalues above
/// `tol · max(1, spectral norm)`.
pub fn q_rank(q: &HermitianMatrix, tol: f64) -> usize {
    q.numerical_rank(tol)
}

/// A map is optimally coherent when the Gramian of its λ vectors has rank 1
/// — equivalently, it reduces to a single diagonal Kraus operator and
/// saturates the coherence-transfer bound.
pub fn is_optimally_coherent(map: &CoolingMap, tol: f64) -> bool {
    map.gramian(1e-9).numerical_rank(tol) == 1
}

/// Reduce an optimally coherent map to scalar amplitudes: `s_j` with
/// `conj(s_j) s_k = ⟨λ_j, λ_k⟩`.
fn scalar_amplitudes(map: &CoolingMap, tol: f64) -> Result<Vec<C64>> {
    let gram = map.gramian(1e-9);
    let rank = gram.numerical_rank(tol);
    if rank > 1 {
        return Err(DilationError::NotOptimallyCoherent { rank });
    }
    let vectors = gram.gram_vectors(tol).map_err(CoolingError::from)?;
    Ok(vectors
        .iter()
        .map(|v| if v.len() == 1 { v[0] } else { C64::new(0.0, 0.0) })
        .collect())
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Per-ground-vector component of a dilation: the λ vectors (in ℂ^g) and μ
/// coefficients describing where `|E_k⟩ ⊗ |ground t⟩` is sent.
struct GroundBlock {
    /// `lambda[k]` is the ℂ^g vector of ground-space amplitudes for level k.
    lambda: Vec<CVec>,
    /// Strictly upper-triangular decay coefficients for this block.
    mu: CMat,
}

/// Core constructor: designate the image of every `|E_k⟩ ⊗ |ground t⟩` and
/// complete to a unitary within each joint-energy eigenspace.
fn build_dilation(
    spectrum: &EnergySpectrum,
    blocks: &[GroundBlock],
    tol: &ToleranceSet,
) -> Result<ThermalDilation> {
    let d = spectrum.dim();
    let g = blocks.len();
    let ancilla = AncillaSpec::for_system(spectrum, g);
    let joint = d * ancilla.dim();
    let skeleton = ThermalDilation {
        system: spectrum.clone(),
        ancilla: ancilla.clone(),
        unitary: UnitaryMatrix::new(CMat::identity(joint, joint), 1.0).unwrap(),
    };

    // Designated columns: preimage joint index -> image vector.
    let mut designated: Vec<(usize, CVec)> = Vec::with_capacity(d * g);
    for (t, block) in blocks.iter().enumerate() {
        for k in 0..d {
            let pre = skeleton.joint_index(k, ancilla.ground_index(t));
            let mut image = CVec::zeros(joint);
            for s in 0..g {
                image[skeleton.joint_index(k, ancilla.ground_index(s))] = block.lambda[k][s];
            }
            for j in 0..k {
                image[skeleton.joint_index(j, ancilla.excited_index((j, k), t))] =
                    block.mu[(j, k)];
            }
            let norm = image.norm();
            if (norm - 1.0).abs() > tol.comp_tol.max(1e-9) * 10.0 {
                return Err(DilationError::CompletenessDefect { defect: (norm - 1.0).abs() });
            }
            designated.push((pre, image));
        }
    }

    // Complete each joint-energy eigenspace separately; this is what keeps
    // the result energy-conserving.
    let levels = skeleton.joint_levels(tol.gap_tol);
    let mut u = CMat::zeros(joint, joint);
    for level in &levels {
        let in_level: std::collections::HashSet<usize> = level.indices.iter().copied().collect();
        let des_here: Vec<&(usize, CVec)> = designated
            .iter()
            .filter(|(pre, _)| in_level.contains(pre))
            .collect();
        for (pre, image) in &des_here {
            // Energy conservation demands the image stays inside the block.
            let leak: f64 = (0..joint)
                .filter(|i| !in_level.contains(i))
                .map(|i| image[i].norm_sqr())
                .sum();
            if leak > 1e-18 {
                return Err(DilationError::CompletionFailed {
                    reason: format!("designated image of {pre} leaks {leak:.3e} across blocks"),
                });
            }
            u.set_column(*pre, image);
        }
        // Orthonormalize the remaining directions of the block against the
        // designated images, assigning them to the undesignated preimages.
        let mut taken: Vec<CVec> = des_here.iter().map(|(_, img)| (*img).clone()).collect();
        let free_pres: Vec<usize> = level
            .indices
            .iter()
            .copied()
            .filter(|idx| !des_here.iter().any(|(pre, _)| pre == idx))
            .collect();
        let mut completions: Vec<CVec> = Vec::with_capacity(free_pres.len());
        for &basis_idx in &level.indices {
            if completions.len() == free_pres.len() {
                break;
            }
            let mut cand = CVec::zeros(joint);
            cand[basis_idx] = C64::new(1.0, 0.0);
            // Twice-iterated Gram-Schmidt; drop candidates that are (near)
            // dependent on the span so far.
            for _ in 0..2 {
                for taken_vec in &taken {
                    let overlap = taken_vec.dotc(&cand);
                    cand -= taken_vec * overlap;
                }
            }
            let norm = cand.norm();
            if norm > 1e-10 {
                let v = cand / C64::new(norm, 0.0);
                taken.push(v.clone());
                completions.push(v);
            }
        }
        if completions.len() != free_pres.len() {
            return Err(DilationError::CompletionFailed {
                reason: format!(
                    "block at energy {} needs {} completions, found {}",
                    level.energy,
                    free_pres.len(),
                    completions.len()
                ),
            });
        }
        for (pre, v) in free_pres.iter().zip(completions) {
            u.set_column(*pre, &v);
        }
    }

    let unitary = UnitaryMatrix::new(u, tol.unit_tol)?;
    Ok(ThermalDilation { system: spectrum.clone(), ancilla, unitary })
}

/// Dilate an optimally coherent cooling map: ancilla ground multiplicity 1,
/// `U(|E_k⟩⊗|F_1⟩) = s_k|E_k⟩⊗|F_1⟩ + Σ_{j<k} μ_{jk}|E_j⟩⊗|F_{jk}⟩`,
/// completed to a unitary inside each joint-energy eigenspace.
pub fn build_thermal_dilation(
    map: &CoolingMap,
    spectrum: &EnergySpectrum,
    tol: &ToleranceSet,
) -> Result<ThermalDilation> {
    if spectrum.dim() != map.dim() {
        return Err(DilationError::DimensionMismatch {
            left: spectrum.dim(),
            right: map.dim(),
        });
    }
    let defect = map.completeness_defect();
    if defect > tol.comp_tol {
        return Err(DilationError::CompletenessDefect { defect });
    }
    let scalars = scalar_amplitudes(map, tol.psd_tol)?;
    let block = GroundBlock {
        lambda: scalars
            .iter()
            .map(|&s| CVec::from_column_slice(&[s]))
            .collect(),
        mu: map.mu().clone(),
    };
    build_dilation(spectrum, &[block], tol)
}

/// Dilate a rational mixture `Σ (m_i/g) E_i` of optimally coherent maps:
/// ancilla ground multiplicity `g = Σ m_i`, with ground vector `t` driving
/// component map `i_t` (`i_t = 1` for `t ≤ m_1`, then `2` up to
/// `m_1 + m_2`, and so on).
///
/// Weights are integer pairs `(numerator, denominator)`; irrational weights
/// are unrepresentable by design and must be approximated by the caller.
pub fn build_mixture_dilation(
    maps: &[CoolingMap],
    weights: &[(u64, u64)],
    spectrum: &EnergySpectrum,
    tol: &ToleranceSet,
) -> Result<ThermalDilation> {
    if maps.is_empty() || maps.len() != weights.len() {
        return Err(DilationError::BadWeights);
    }
    if weights.iter().any(|&(_, den)| den == 0) {
        return Err(DilationError::BadWeights);
    }
    let dim = maps[0].dim();
    for map in maps {
        if map.dim() != dim {
            return Err(DilationError::DimensionMismatch { left: map.dim(), right: dim });
        }
    }
    if spectrum.dim() != dim {
        return Err(DilationError::DimensionMismatch { left: spectrum.dim(), right: dim });
    }
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = weights.iter().fold(1u64, |acc, &(_, den)| acc / gcd(acc, den) * den);
    let multiplicities: Vec<u64> = weights.iter().map(|&(num, den)| num * (g / den)).collect();
    let total: u64 = multiplicities.iter().sum();
    if total != g {
        return Err(DilationError::WeightsNotNormalized { num: total, den: g });
    }
    let g = g as usize;

    let mut blocks = Vec::with_capacity(g);
    for (i, map) in maps.iter().enumerate() {
        let defect = map.completeness_defect();
        if defect > tol.comp_tol {
            return Err(DilationError::CompletenessDefect { defect });
        }
        let scalars = scalar_amplitudes(map, tol.psd_tol)?;
        for _copy in 0..multiplicities[i] {
            let t = blocks.len();
            // λ_{k(t)} = s_k · e_t keeps images for different ground vectors
            // orthogonal by construction.
            let lambda = scalars
                .iter()
                .map(|&s| {
                    let mut v = CVec::zeros(g);
                    v[t] = s;
                    v
                })
                .collect();
            blocks.push(GroundBlock { lambda, mu: map.mu().clone() });
        }
    }
    build_dilation(spectrum, &blocks, tol)
}

// ---------------------------------------------------------------------------
// Search hook for the general-rank construction
// ---------------------------------------------------------------------------

/// A candidate witness for the general-rank dilation condition: `g`
/// collections of `d` vectors in ℂ^g, each reproducing the Gramian `Q`,
/// with the same-level vectors of different collections pairwise
/// orthogonal.
#[derive(Debug, Clone)]
pub struct CollectionsWitness {
    /// `collections[t][k]` is the vector for level `k` in collection `t`.
    pub collections: Vec<Vec<CVec>>,
    /// Largest violation across both constraint families.
    pub defect: f64,
}

/// Measure how far a set of collections is from witnessing the condition:
/// the worst deviation of any collection's Gramian from `Q`, or of any
/// cross-collection same-level overlap from zero.
pub fn collections_defect(collections: &[Vec<CVec>], q: &HermitianMatrix) -> f64 {
    let d = q.dim();
    let mut worst = 0.0f64;
    for coll in collections {
        for j in 0..d {
            for k in 0..d {
                worst = worst
                    .max((linalg::inner(&coll[j], &coll[k]) - q.matrix()[(j, k)]).norm());
            }
        }
    }
    for t in 0..collections.len() {
        for s in (t + 1)..collections.len() {
            for (a, b) in collections[t].iter().zip(&collections[s]) {
                worst = worst.max(linalg::inner(a, b).norm());
            }
        }
    }
    worst
}

/// Search for collections witnessing the general-rank condition on a PSD
/// matrix `Q` of rank `g` — the configuration that would realize the
/// associated map as a thermal operation with a `g`-fold degenerate
/// ancilla ground level.
///
/// Collection 1 is the Gram vectors of `Q`; the others are unitary images
/// of it, parametrized by Givens rotations and phases whose angles are
/// tuned by random-restart coordinate descent on the violation score.
/// This is only proven to succeed for `g = 1` and for `d = 2`; elsewhere
/// it returns the best witness found with no guarantee — `None` means
/// nothing reached `tol` at this search budget, not infeasibility.
pub fn search_property_witness(
    q: &HermitianMatrix,
    attempts: usize,
    seed: u64,
    tol: f64,
) -> Option<CollectionsWitness> {

    let g = q.numerical_rank(tol.max(1e-12));
    let base = q.gram_vectors(tol.max(1e-12)).ok()?;
    if g <= 1 {
        let collections = vec![base];
        let defect = collections_defect(&collections, q);
        return Some(CollectionsWitness { collections, defect });
    }
    // Each extra collection is a unitary image of the base (which keeps its
    // Gramian exactly), parametrized by a Givens rotation (angle + phase)
    // per coordinate pair followed by diagonal phases.
    let pairs: Vec<(usize, usize)> =
        (0..g).flat_map(|a| ((a + 1)..g).map(move |b| (a, b))).collect();
    let params_per = 2 * pairs.len() + (g - 1);
    let n_params = params_per * (g - 1);
    let build = |params: &[f64]| -> Vec<Vec<CVec>> {
        let mut collections = vec![base.clone()];
        for t in 1..g {
            let chunk = &params[(t - 1) * params_per..t * params_per];
            let mut u = CMat::identity(g, g);
            for (idx, &(a, b)) in pairs.iter().enumerate() {
                let theta = chunk[2 * idx];
                let phi = chunk[2 * idx + 1];
                let mut giv = CMat::identity(g, g);
                giv[(a, a)] = C64::new(theta.cos(), 0.0);
                giv[(a, b)] = C64::from_polar(theta.sin(), phi);
                giv[(b, a)] = C64::from_polar(-theta.sin(), -phi);
                giv[(b, b)] = C64::new(theta.cos(), 0.0);
                u = giv * u;
            }
            for (slot, &psi) in chunk[2 * pairs.len()..].iter().enumerate() {
                let mut phase = CMat::identity(g, g);
                phase[(slot + 1, slot + 1)] = C64::from_polar(1.0, psi);
                u = phase * u;
            }
            collections.push(base.iter().map(|w| &u * w).collect());
        }
        collections
    };
    let score = |params: &[f64]| collections_defect(&build(params), q);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..attempts.max(1) {
        let mut params: Vec<f64> = (0..n_params)
            .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let mut current = score(&params);
        let mut step = 0.5f64;
        for _sweep in 0..60 {
            let mut improved = false;
            for i in 0..n_params {
                for delta in [step, -step] {
                    let saved = params[i];
                    params[i] = saved + delta;
                    let candidate = score(&params);
                    if candidate < current {
                        current = candidate;
                        improved = true;
                    } else {
                        params[i] = saved;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-10 {
                    break;
                }
            }
            if current <= tol * 1e-2 {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| current < *b) {
            best = Some((current, params));
        }
        if best.as_ref().is_some_and(|(b, _)| *b <= tol * 1e-2) {
            break;
        }
    }
    let (defect, params) = best?;
    if defect <= tol {
        Some(CollectionsWitness { collections: build(&params), defect })
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Defect report of a dilation against its intended channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationReport {
    pub unitarity_defect: f64,
    pub energy_offblock: f64,
    pub max_channel_deviation: f64,
}

/// Verify a dilation: unitarity of `U`, energy conservation across the
/// joint spectrum, and agreement of the induced channel with `expected` on
/// the full matrix-unit basis (exhaustive by linearity) plus `samples`
/// random density matrices drawn from `seed`.
pub fn verify_dilation(
    dilation: &ThermalDilation,
    expected: &KrausSet,
    samples: usize,
    seed: u64,
    tol: &ToleranceSet,
) -> DilationReport {
    let d = dilation.system.dim();
    let unitarity_defect = crate::quantum::unitarity_defect(dilation.unitary.matrix());
    let levels = dilation.joint_levels(tol.gap_tol);
    let energy_offblock =
        match check_energy_conserving(&dilation.unitary, &levels, tol.unit_tol, tol.gap_tol) {
            Ok(check) => check.max_offblock,
            Err(_) => f64::INFINITY,
        };
    let mut max_dev = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            let unit = crate::quantum::matrix_unit(d, j, k);
            let via_dilation = dilation.apply_raw(&unit);
            let via_kraus = expected.apply_raw(&unit);
            max_dev = max_dev.max(linalg::max_abs_diff(&via_dilation, &via_kraus));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let rho = crate::oracle::random_density(&mut rng, d, tol);
        let via_dilation = dilation.apply_raw(rho.matrix());
        let via_kraus = expected.apply_raw(rho.matrix());
        max_dev = max_dev.max(linalg::max_abs_diff(&via_dilation, &via_kraus));
    }
    DilationReport {
        unitarity_defect,
        energy_offblock,
        max_channel_deviation: max_dev,
    }
}

// ---------------------------------------------------------------------------
// Two-level equivalence
// ---------------------------------------------------------------------------

/// Outcome of the qubit equivalence check: cooling maps and thermal
/// operations admit the same transitions on two-level systems.
#[derive(Debug, Clone)]
pub enum TwoLevelEquivalence {
    /// The transition is infeasible under cooling maps, so there is nothing
    /// to realize.
    NotApplicable,
    /// A verified dilation realizing the transition.
    Realized {
        dilation: Box<ThermalDilation>,
        report: DilationReport,
    },
}

impl TwoLevelEquivalence {
    /// Whether the construction succeeded wherever it applied.
    pub fn holds(&self, tol: f64) -> bool {
        match self {
            TwoLevelEquivalence::NotApplicable => true,
            TwoLevelEquivalence::Realized { report, .. } => {
                report.unitarity_defect <= tol
                    && report.energy_offblock <= tol
                    && report.max_channel_deviation <= tol
            }
        }
    }
}

/// For qubit states, a feasible cooling-map transition is always realizable
/// as a thermal operation: rank-1 certificates dilate directly, and rank-2
/// certificates dilate with a doubly degenerate ground level whose second
/// copy carries the symplectic-rotated Gram vectors.
pub fn two_level_equivalence_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    spectrum: &EnergySpectrum,
    tol: &ToleranceSet,
) -> Result<TwoLevelEquivalence> {
    assert_eq!(rho.dim(), 2, "two-level check needs qubit states");
    let decision = decide_transition(rho, sigma, tol)?;
    let cert = match decision {
        Decision::Infeasible(_) => return Ok(TwoLevelEquivalence::NotApplicable),
        Decision::Feasible(cert) => cert,
    };
    let map = synthesize_cooling_map(&cert)?;
    let rank = q_rank(&cert.q, tol.psd_tol);
    let dilation = if rank <= 1 {
        build_thermal_dilation(&map, spectrum, tol)?
    } else {
        // Rank 2: two collections of Gram vectors in ℂ², connected by a
        // unitary that maps each onto its orthogonal complement. With
        // w = (a, b), the symplectic conjugate (-conj b, conj a) has the
        // same norm and ⟨w1⊥, w2⊥⟩ = conj⟨w1, w2⟩, so a single phase on
        // the second vector restores the Gramian.
        let w: Vec<CVec> = cert.gram.clone();
        let perp = |v: &CVec| -> CVec {
            CVec::from_column_slice(&[-v[1].conj(), v[0].conj()])
        };
        let z = linalg::inner(&w[0], &w[1]);
        let phase = if z.norm() > 1e-15 { z.conj() / z } else { C64::new(1.0, 0.0) };
        let second = [perp(&w[0]), perp(&w[1]) * phase];
        let blocks = vec![
            GroundBlock {
                lambda: vec![
                    CVec::from_column_slice(&[w[0][0], w[0][1]]),
                    CVec::from_column_slice(&[w[1][0], w[1][1]]),
                ],
                mu: map.mu().clone(),
            },
            GroundBlock {
                lambda: vec![
                    CVec::from_column_slice(&[second[0][0], second[0][1]]),
                    CVec::from_column_slice(&[second[1][0], second[1][1]]),
                ],
                mu: map.mu().clone(),
            },
        ];
        build_dilation(spectrum, &blocks, tol)?
    };
    let report = verify_dilation(&dilation, &cooling::kraus_of(&map), 4, 0xC001, tol);
    Ok(TwoLevelEquivalence::Realized { dilation: Box::new(dilation), report })
}
