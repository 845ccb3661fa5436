//! Seeded randomized ground truth: samplers of valid cooling maps,
//! Gibbs-preserving channels and density matrices, fuzzers hunting for
//! counterexamples to the feasibility conditions, and reachable-region
//! scans on qubits.
//!
//! Determinism contract: identical [`SamplerConfig`] values (including the
//! seed) produce bit-identical samples and reports. Per-trial randomness is
//! derived by giving each trial its own ChaCha stream, so trials are
//! independent and order-insensitive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cooling::{apply_cooling_map, decide_transition, CoolingMap};
use crate::gibbs::GpKrausSet;
use crate::linalg::{CMat, CVec, C64};
use crate::majorization::{GibbsDistribution, ProbabilityVector};
use crate::quantum::DensityMatrix;
use crate::tol::ToleranceSet;

/// Configuration of a sampling campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Base seed; trial `t` uses ChaCha stream `t` of this seed.
    pub seed: u64,
    /// System dimension (`d ≥ 2`).
    pub dim: usize,
    /// Number of diagonal Kraus operators for cooling maps, and number of
    /// Kraus operators for Gibbs-preserving channels (`≤ d` for the former).
    pub n_diag: usize,
    /// Number of trials in fuzz campaigns and region scans.
    pub trials: usize,
    /// Search resolution of the stochastic-matrix oracle.
    pub resolution: f64,
}

impl SamplerConfig {
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// One standard normal via Box–Muller; uniform inputs come from the seeded
/// generator, so the output stream is reproducible across platforms.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Uniformly random unit vector on the complex sphere of dimension `n`
/// (normalized standard Gaussians; rotation invariant, no rejection).
pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    loop {
        let v = CVec::from_iterator(n, (0..n).map(|_| complex_gaussian(rng)));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// A Ginibre-induced random density matrix `GG†/Tr(GG†)`; generically dense
/// with all entries nonzero.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize, tol: &ToleranceSet) -> DensityMatrix {
    loop {
        let g = CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        let m = &g * g.adjoint();
        let trace = m.trace().re;
        let rho = m / C64::new(trace, 0.0);
        // Resample in the (measure-zero) event of a near-vanishing entry,
        // so the all-nonzero precondition of the certificate matrix holds.
        let min_entry = rho.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        if min_entry > 1e-6 {
            return DensityMatrix::new(rho, tol).expect("Ginibre states are valid");
        }
    }
}

/// Sample a cooling map with exact completeness: for each column `k`, the
/// composite vector `(λ_k, μ_{jk} for j<k)` is an independent uniformly
/// random complex unit vector of dimension `n_diag + k`.
pub fn random_cooling_map<R: Rng>(rng: &mut R, dim: usize, n_diag: usize) -> CoolingMap {
    let mut lambda = Vec::with_capacity(dim);
    let mut mu = CMat::zeros(dim, dim);
    for k in 0..dim {
        let composite = random_unit_vector(rng, n_diag + k);
        lambda.push(CVec::from_iterator(n_diag, (0..n_diag).map(|i| composite[i])));
        for j in 0..k {
            mu[(j, k)] = composite[n_diag + j];
        }
    }
    CoolingMap::new(lambda, mu).expect("sampled structure is well-formed")
}

/// Sample a random upper-triangular column-stochastic matrix: column `k`
/// carries a Dirichlet(1,…,1) distribution over rows `0..=k`.
pub fn random_utcs_matrix<R: Rng>(rng: &mut R, dim: usize) -> crate::majorization::UtcsMatrix {
    let mut entries = vec![0.0f64; dim * dim];
    for k in 0..dim {
        let mut col: Vec<f64> = (0..=k)
            .map(|_| -(rng.gen_range(f64::MIN_POSITIVE..1.0f64)).ln())
            .collect();
        let sum: f64 = col.iter().sum();
        for (j, w) in col.drain(..).enumerate() {
            entries[j * dim + k] = w / sum;
        }
    }
    crate::majorization::UtcsMatrix::new(entries, dim, 1e-9)
        .expect("Dirichlet columns are stochastic")
}

/// Sample a Gibbs-preserving channel as a random isometry `V: ℂ^d → ℂ^{d·r}`
/// whose first column is `|E_1⟩⊗|e_1⟩`; the remaining columns are random
/// orthonormal vectors orthogonal to it. The induced channel is
/// trace-preserving and fixes the ground projector exactly.
pub fn random_gp_channel<R: Rng>(rng: &mut R, dim: usize, r: usize) -> GpKrausSet {
    let joint = dim * r;
    let mut columns: Vec<CVec> = Vec::with_capacity(dim);
    let mut first = CVec::zeros(joint);
    first[0] = C64::new(1.0, 0.0);
    columns.push(first);
    while columns.len() < dim {
        let mut candidate = CVec::from_iterator(joint, (0..joint).map(|_| complex_gaussian(rng)));
        // Twice-iterated Gram-Schmidt keeps orthogonality at machine scale.
        for _ in 0..2 {
            for col in &columns {
                let overlap = col.dotc(&candidate);
                candidate -= col * overlap;
            }
        }
        let norm = candidate.norm();
        if norm > 1e-6 {
            columns.push(candidate / C64::new(norm, 0.0));
        }
    }
    let mut kraus = Vec::with_capacity(r);
    for i in 0..r {
        let mut op = CMat::zeros(dim, dim);
        for row in 0..dim {
            for col in 0..dim {
                op[(row, col)] = columns[col][row * r + i];
            }
        }
        kraus.push(op);
    }
    GpKrausSet::from_matrices(kraus).expect("isometry columns give the block form")
}

// ---------------------------------------------------------------------------
// Fuzzing the feasibility conditions
// ---------------------------------------------------------------------------

/// A fuzz counterexample with everything needed to reproduce it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzViolation {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub n_diag: usize,
    pub detail: String,
}

/// Report of a fuzz campaign; `violations` is expected to stay empty.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub dim: usize,
    pub violations: Vec<FuzzViolation>,
}

/// Run `cfg.trials` rounds of (random cooling map, random all-nonzero state)
/// and check that the feasibility decision accepts the pair
/// `(ρ, E(ρ))`. Any rejection is a counterexample to the necessity of the
/// transition conditions and is reported with its reproducer seed.
pub fn necessity_fuzz(cfg: &SamplerConfig, tol: &ToleranceSet) -> FuzzReport {
    let mut violations = Vec::new();
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial as u64);
        let map = random_cooling_map(&mut rng, cfg.dim, cfg.n_diag);
        let rho = random_density(&mut rng, cfg.dim, tol);
        let sigma = match apply_cooling_map(&map, &rho, tol) {
            Ok(s) => s,
            Err(err) => {
                violations.push(FuzzViolation {
                    trial,
                    seed: cfg.seed,
                    dim: cfg.dim,
                    n_diag: cfg.n_diag,
                    detail: format!("sampled map failed to apply: {err}"),
                });
                continue;
            }
        };
        match decide_transition(&rho, &sigma, tol) {
            Ok(decision) if decision.is_feasible() => {}
            Ok(decision) => violations.push(FuzzViolation {
                trial,
                seed: cfg.seed,
                dim: cfg.dim,
                n_diag: cfg.n_diag,
                detail: format!("map image judged infeasible: {decision:?}"),
            }),
            Err(err) => violations.push(FuzzViolation {
                trial,
                seed: cfg.seed,
                dim: cfg.dim,
                n_diag: cfg.n_diag,
                detail: format!("decision errored: {err}"),
            }),
        }
    }
    FuzzReport { trials: cfg.trials, dim: cfg.dim, violations }
}

// ---------------------------------------------------------------------------
// Reachable-region scans (qubit)
// ---------------------------------------------------------------------------

/// Which channel family produced a region point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionModel {
    Cooling,
    Gp,
}

/// One sampled image state, recorded as `(y, β) = (|σ_12|, σ_11)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub model: RegionModel,
    pub x: f64,
    pub y: f64,
    pub beta: f64,
}

/// Sample cooling maps and Gibbs-preserving channels acting on a qubit
/// state and record where its image lands in the `(y, β)` plane.
pub fn reachable_region_scan(
    rho: &DensityMatrix,
    cfg: &SamplerConfig,
    tol: &ToleranceSet,
) -> Vec<RegionPoint> {
    assert_eq!(rho.dim(), 2, "region scans are defined on qubits");
    let x = rho.matrix()[(0, 1)].norm();
    let mut points = Vec::with_capacity(2 * cfg.trials);
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial as u64);
        let map = random_cooling_map(&mut rng, 2, cfg.n_diag.clamp(1, 2));
        if let Ok(sigma) = apply_cooling_map(&map, rho, tol) {
            points.push(RegionPoint {
                model: RegionModel::Cooling,
                x,
                y: sigma.matrix()[(0, 1)].norm(),
                beta: sigma.matrix()[(0, 0)].re,
            });
        }
        let gp = random_gp_channel(&mut rng, 2, cfg.n_diag.max(2));
        if let Ok(sigma) = gp.apply(rho, tol) {
            points.push(RegionPoint {
                model: RegionModel::Gp,
                x,
                y: sigma.matrix()[(0, 1)].norm(),
                beta: sigma.matrix()[(0, 0)].re,
            });
        }
    }
    points
}

/// Analytic boundary of the cooling-reachable region from
/// `ρ(x) = [[½, x],[x, ½]]`: `y ≤ x·√(2(1-β))` for `β ≥ ½`.
pub fn cooling_boundary(x: f64, beta: f64) -> f64 {
    if beta < 0.5 {
        return f64::NAN;
    }
    x * (2.0 * (1.0 - beta)).max(0.0).sqrt()
}

/// Analytic boundary of the Gibbs-preserving-reachable region from the same
/// family: `y² ≤ (1-β)(β - ½ + 2x²)`.
pub fn gp_boundary(x: f64, beta: f64) -> f64 {
    let rhs = (1.0 - beta) * (beta - 0.5 + 2.0 * x * x);
    if rhs < 0.0 {
        f64::NAN
    } else {
        rhs.sqrt()
    }
}

// ---------------------------------------------------------------------------
// Stochastic-matrix oracle for thermo-majorization
// ---------------------------------------------------------------------------

/// Decide by direct search whether some column-stochastic `M` fixing the
/// Gibbs distribution maps `u` within `cfg.resolution` of `v`.
///
/// Runs alternating projections between the affine set
/// `{M : Mγ = γ, Mu = v, column sums 1}` and the nonnegative orthant from
/// several starts (the identity, the rank-1 map onto γ, and random
/// column-stochastic matrices), then checks the renormalized candidate.
/// Intended for `d ≤ 3`; used only to validate the Lorenz-curve decision.
pub fn thermo_stochastic_oracle(
    u: &ProbabilityVector,
    v: &ProbabilityVector,
    gibbs: &GibbsDistribution,
    cfg: &SamplerConfig,
) -> bool {
    let d = u.dim();
    let gamma = gibbs.weights();
    let res = cfg.resolution;
    let feasible = |m: &[f64]| -> bool {
        // Renormalize columns, then test stochasticity and both images.
        let mut cand = m.to_vec();
        for k in 0..d {
            let col_sum: f64 = (0..d).map(|j| cand[j * d + k]).sum();
            if col_sum <= 0.0 {
                return false;
            }
            for j in 0..d {
                cand[j * d + k] = (cand[j * d + k] / col_sum).max(0.0);
            }
        }
        let image_ok = |input: &[f64], target: &[f64]| -> bool {
            (0..d).all(|j| {
                let got: f64 = (0..d).map(|k| cand[j * d + k] * input[k]).sum();
                (got - target[j]).abs() <= res
            })
        };
        image_ok(gamma, gamma) && image_ok(u.weights(), v.weights())
    };

    // Deterministic candidates first.
    let identity: Vec<f64> = (0..d * d)
        .map(|i| if i % (d + 1) == 0 { 1.0 } else { 0.0 })
        .collect();
    if feasible(&identity) {
        return true;
    }
    let to_gamma: Vec<f64> = (0..d)
        .flat_map(|j| std::iter::repeat_n(gamma[j], d))
        .collect();
    if feasible(&to_gamma) {
        return true;
    }

    // Affine projector onto {Mγ = γ, Mu = v, column sums 1}.
    let constraints = build_constraints(d, gamma, u.weights(), v.weights());
    let mut starts: Vec<Vec<f64>> = vec![identity, to_gamma];
    let n_random = cfg.trials.clamp(4, 64);
    let mut rng = cfg.rng(u64::MAX);
    for _ in 0..n_random {
        let mut m = vec![0.0; d * d];
        for k in 0..d {
            // Dirichlet(1,…,1) column via normalized exponentials.
            let mut col: Vec<f64> = (0..d)
                .map(|_| -(rng.gen_range(f64::MIN_POSITIVE..1.0f64)).ln())
                .collect();
            let s: f64 = col.iter().sum();
            for j in 0..d {
                col[j] /= s;
                m[j * d + k] = col[j];
            }
        }
        starts.push(m);
    }
    for start in starts {
        let mut m = start;
        for _ in 0..4000 {
            constraints.project(&mut m);
            for x in m.iter_mut() {
                if *x < 0.0 {
                    *x = 0.0;
                }
            }
        }
        if feasible(&m) {
            return true;
        }
    }
    false
}

/// The affine constraint system `C·vec(M) = b` of the oracle, with a
/// pseudo-inverse-based Euclidean projector.
struct AffineConstraints {
    c: Vec<Vec<f64>>,      // rows
    b: Vec<f64>,
    gram_pinv: Vec<Vec<f64>>, // (C Cᵀ)⁺
}

fn build_constraints(d: usize, gamma: &[f64], u: &[f64], v: &[f64]) -> AffineConstraints {
    let n = d * d;
    let mut c: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for j in 0..d {
        let mut row = vec![0.0; n];
        for k in 0..d {
            row[j * d + k] = gamma[k];
        }
        c.push(row);
        b.push(gamma[j]);
    }
    for j in 0..d {
        let mut row = vec![0.0; n];
        for k in 0..d {
            row[j * d + k] = u[k];
        }
        c.push(row);
        b.push(v[j]);
    }
    for k in 0..d {
        let mut row = vec![0.0; n];
        for j in 0..d {
            row[j * d + k] = 1.0;
        }
        c.push(row);
        b.push(1.0);
    }
    // Pseudo-inverse of the small Gram matrix C Cᵀ via eigendecomposition.
    let rows = c.len();
    let mut gram = CMat::zeros(rows, rows);
    for a in 0..rows {
        for bb in 0..rows {
            let dot: f64 = (0..n).map(|i| c[a][i] * c[bb][i]).sum();
            gram[(a, bb)] = C64::new(dot, 0.0);
        }
    }
    let (eigs, vecs) = crate::linalg::hermitian_eigen(&gram);
    let cutoff = eigs.iter().fold(0.0f64, |acc, w| acc.max(w.abs())) * 1e-12;
    let mut pinv = vec![vec![0.0; rows]; rows];
    for (idx, &w) in eigs.iter().enumerate() {
        if w > cutoff {
            for a in 0..rows {
                for bb in 0..rows {
                    pinv[a][bb] += vecs[(a, idx)].re * vecs[(bb, idx)].re / w;
                }
            }
        }
    }
    AffineConstraints { c, b, gram_pinv: pinv }
}

impl AffineConstraints {
    /// Euclidean projection onto `{x : Cx = b}` (in the least-squares sense
    /// when the system is rank-deficient).
    fn project(&self, x: &mut [f64]) {
        let rows = self.c.len();
        let residual: Vec<f64> = (0..rows)
            .map(|a| {
                let cx: f64 = self.c[a].iter().zip(x.iter()).map(|(ca, xi)| ca * xi).sum();
                cx - self.b[a]
            })
            .collect();
        let weights: Vec<f64> = (0..rows)
            .map(|a| (0..rows).map(|bb| self.gram_pinv[a][bb] * residual[bb]).sum())
            .collect();
        for (row, weight) in self.c.iter().zip(&weights) {
            for (xi, coeff) in x.iter_mut().zip(row) {
                *xi -= coeff * weight;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::thermo_majorizes;
    use crate::quantum::EnergySpectrum;

    fn tols() -> ToleranceSet {
        ToleranceSet::default()
    }

    fn cfg(dim: usize) -> SamplerConfig {
        SamplerConfig { seed: 7, dim, n_diag: dim.min(3), trials: 50, resolution: 1e-3 }
    }

    #[test]
    fn sampler_is_deterministic() {
        let c = cfg(3);
        let a = random_cooling_map(&mut c.rng(0), 3, 2);
        let b = random_cooling_map(&mut c.rng(0), 3, 2);
        assert_eq!(a, b);
        let ra = random_density(&mut c.rng(1), 3, &tols());
        let rb = random_density(&mut c.rng(1), 3, &tols());
        assert_eq!(ra, rb);
    }

    #[test]
    fn sampled_maps_are_exactly_complete() {
        let c = cfg(4);
        for trial in 0..100 {
            let map = random_cooling_map(&mut c.rng(trial), 4, 3);
            assert!(map.completeness_defect() <= 1e-15);
        }
    }

    #[test]
    fn sampled_map_mean_survival_weight() {
        // d=2, one diagonal operator: column 2 is a random point on the
        // complex 2-sphere, so P_{2|2} = |λ_2|² is uniform on [0,1] with
        // mean ½.
        let c = SamplerConfig { seed: 11, dim: 2, n_diag: 1, trials: 0, resolution: 1e-3 };
        let n = 100_000;
        let mut rng = c.rng(0);
        let mut acc = 0.0;
        for _ in 0..n {
            let map = random_cooling_map(&mut rng, 2, 1);
            let p = map.induced_utcs(1e-9).unwrap();
            acc += p.entry(1, 1);
        }
        let mean = acc / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn gp_single_kraus_is_a_ground_fixing_unitary() {
        let c = cfg(3);
        for trial in 0..20 {
            let gp = random_gp_channel(&mut c.rng(trial), 3, 1);
            let op = gp.to_kraus_set().operators()[0].clone();
            assert!(crate::quantum::unitarity_defect(&op) < 1e-12);
            assert!((op[(0, 0)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gp_samples_fix_ground_and_are_complete() {
        let c = cfg(3);
        for trial in 0..50 {
            let gp = random_gp_channel(&mut c.rng(trial), 3, 3);
            let kraus = gp.to_kraus_set();
            assert!(kraus.completeness(1e-12).complete);
            let ground =
                DensityMatrix::new(crate::quantum::matrix_unit(3, 0, 0), &tols()).unwrap();
            let image = gp.apply(&ground, &tols()).unwrap();
            assert!(
                crate::linalg::max_abs_diff(image.matrix(), ground.matrix()) <= 1e-12
            );
        }
    }

    #[test]
    fn necessity_fuzz_small_campaign_is_clean() {
        for dim in 2..=4 {
            let c = SamplerConfig { seed: 3, dim, n_diag: dim, trials: 100, resolution: 1e-3 };
            let report = necessity_fuzz(&c, &tols());
            assert!(
                report.violations.is_empty(),
                "dim {dim}: {:?}",
                report.violations.first()
            );
        }
    }

    #[test]
    fn necessity_fuzz_zero_trials() {
        let c = SamplerConfig { seed: 3, dim: 2, n_diag: 2, trials: 0, resolution: 1e-3 };
        let report = necessity_fuzz(&c, &tols());
        assert_eq!(report.trials, 0);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn region_scan_from_ground_state_is_pinned() {
        let ground = DensityMatrix::new(crate::quantum::matrix_unit(2, 0, 0), &tols()).unwrap();
        let c = cfg(2);
        let points = reachable_region_scan(&ground, &c, &tols());
        for p in points.iter().filter(|p| p.model == RegionModel::Cooling) {
            assert!(p.y < 1e-12);
            assert!((p.beta - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stochastic_oracle_trivial_cases() {
        let spectrum = EnergySpectrum::new(vec![0.0, 1.0], 1e-9).unwrap();
        let gibbs = GibbsDistribution::new(spectrum, 1.0).unwrap();
        let gamma = ProbabilityVector::new(gibbs.weights().to_vec(), 1e-10).unwrap();
        let c = cfg(2);
        assert!(thermo_stochastic_oracle(&gamma, &gamma, &gibbs, &c));
        // Pumping all weight up is impossible at any finite β.
        let u = ProbabilityVector::new(vec![1.0, 0.0], 1e-10).unwrap();
        let v = ProbabilityVector::new(vec![0.0, 1.0], 1e-10).unwrap();
        assert!(!thermo_stochastic_oracle(&u, &v, &gibbs, &c));
    }

    #[test]
    fn stochastic_oracle_agrees_with_curve_on_qubits() {
        let spectrum = EnergySpectrum::new(vec![0.0, 1.0], 1e-9).unwrap();
        let gibbs = GibbsDistribution::new(spectrum, 1.3).unwrap();
        let c = cfg(2);
        let mut rng = c.rng(99);
        let mut checked = 0;
        while checked < 60 {
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0);
            let u = ProbabilityVector::new(vec![a, 1.0 - a], 1e-10).unwrap();
            let v = ProbabilityVector::new(vec![b, 1.0 - b], 1e-10).unwrap();
            let margin = crate::majorization::thermo_margin(&u, &v, &gibbs).unwrap();
            if margin.abs() < 20.0 * c.resolution {
                continue; // too close to the boundary for a 1e-3 search
            }
            let curve = thermo_majorizes(&u, &v, &gibbs, 1e-12).unwrap();
            let search = thermo_stochastic_oracle(&u, &v, &gibbs, &c);
            assert_eq!(curve, search, "u={:?} v={:?}", u.weights(), v.weights());
            checked += 1;
        }
    }
}
