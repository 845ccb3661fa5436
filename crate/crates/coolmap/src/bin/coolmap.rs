//! Command-line front end: feasibility checks, Kraus synthesis, thermal
//! dilations, Gibbs-preserving monotones, reachable-region scans,
//! thermo-majorization sweeps and necessity fuzzing.
//!
//! Exit codes: 0 success/feasible, 2 invalid input, 3 infeasible (or fuzz
//! violations), 4 structural precondition failure. Decision output goes to
//! stdout as JSON or CSV exactly as documented; never to stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coolmap::cooling::{
    decide_transition, synthesize_cooling_map, CoolingMap, Decision,
};
use coolmap::dilation::{
    build_mixture_dilation, build_thermal_dilation, is_optimally_coherent, verify_dilation,
    DilationError,
};
use coolmap::gibbs::{canonical_params, nu_c, nu_i, schur_complement};
use coolmap::json::{
    self, CertificateJson, CoolingMapJson, DecisionJson, DilateInputJson, DilationJson,
    MatrixJson, MonotonesJson, SpectrumJson, VectorJson, ViolationJson,
};
use coolmap::majorization::beta_sweep_limit;
use coolmap::oracle::{
    cooling_boundary, gp_boundary, necessity_fuzz, reachable_region_scan, RegionModel,
    SamplerConfig,
};
use coolmap::quantum::DensityMatrix;
use coolmap::ToleranceSet;

const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_STRUCTURAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "coolmap",
    about = "Decide, synthesize and verify quantum state transitions under cooling maps",
    long_about = None,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TolArg {
    /// Decision tolerance; scales the whole tolerance block so the PSD
    /// tolerance equals this value (default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
}

impl TolArg {
    fn tolerances(&self) -> ToleranceSet {
        match self.tol {
            Some(t) => ToleranceSet::with_decision_tol(t),
            None => ToleranceSet::default(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide feasibility of rho -> sigma under cooling maps; prints the
    /// decision JSON with a certificate or a violation.
    Check {
        /// Density-matrix JSON file {"dim", "re", "im"} for the initial state.
        #[arg(long)]
        rho: PathBuf,
        /// Density-matrix JSON file for the target state.
        #[arg(long)]
        sigma: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Decide feasibility and, when feasible, print the synthesized cooling
    /// map together with the certificate.
    Synthesize {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Build and verify a thermal dilation of an optimally coherent map or
    /// a declared rational mixture (exit 4 when neither applies).
    Dilate {
        /// Cooling-map JSON, or {"mixture": [{"num", "den", "map"}, ...]}.
        #[arg(long)]
        map: PathBuf,
        /// System energies as JSON {"energies": [...]}; defaults to
        /// 0, 1, 2.3, 3.9, ... (strictly increasing, generic gaps).
        #[arg(long)]
        energies: Option<PathBuf>,
        /// Random density matrices to verify against, on top of the full
        /// matrix-unit basis.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, env = "COOLMAP_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Print the Gibbs-preserving monotones of a state:
    /// {"nu_I", "nu_C", "alpha", "schur"}.
    Monotones {
        #[arg(long)]
        rho: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Sample reachable (y, beta) points from rho(x) under cooling maps and
    /// Gibbs-preserving channels; writes CSV with analytic boundary columns.
    ///
    /// CSV columns: model (cooling|gp), x, y = |sigma_12|, beta = sigma_11,
    /// y_cooling_bound = x*sqrt(2(1-beta)), and
    /// y_gp_bound = sqrt((1-beta)(beta-1/2+2x^2)); bound columns are NaN
    /// where the bound is undefined. Points are binned on a 200x200 grid
    /// unless --raw is given.
    Region {
        /// Initial coherence x of rho(x) = [[1/2, x],[x, 1/2]]; 0 <= x <= 1/2.
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "COOLMAP_SEED", default_value_t = 0)]
        seed: u64,
        /// Output CSV path; use '-' for stdout.
        #[arg(long)]
        out: PathBuf,
        /// Emit every sampled point instead of binning on a 200x200 grid.
        #[arg(long, default_value_t = false)]
        raw: bool,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Sweep thermo-majorization against UT majorization over a list of
    /// inverse temperatures.
    ThermoLimit {
        /// Probability-vector JSON {"dim", "w"} for u.
        #[arg(long)]
        u: PathBuf,
        /// Probability-vector JSON for v.
        #[arg(long)]
        v: PathBuf,
        /// Energy spectrum JSON {"energies": [...]}.
        #[arg(long)]
        energies: PathBuf,
        /// Comma-separated list of inverse temperatures.
        #[arg(long, value_delimiter = ',')]
        betas: Vec<f64>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Fuzz the feasibility conditions: random cooling maps applied to
    /// random states must always be judged feasible. Violations print as
    /// JSON lines with reproducer seeds; exit 3 if any are found.
    Fuzz {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "COOLMAP_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of diagonal Kraus operators; defaults to the dimension.
        #[arg(long)]
        n_diag: Option<usize>,
        #[command(flatten)]
        tol: TolArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_density(path: &PathBuf, tol: &ToleranceSet) -> Result<DensityMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    json::density_from_json(&text, tol).map_err(|e| format!("{}: {e}", path.display()))
}

fn decision_document(decision: &Decision, tol: &ToleranceSet) -> DecisionJson {
    match decision {
        Decision::Feasible(cert) => DecisionJson {
            feasible: true,
            certificate: Some(CertificateJson::from_certificate(cert)),
            violation: None,
            tolerances: *tol,
        },
        Decision::Infeasible(violation) => DecisionJson {
            feasible: false,
            certificate: None,
            violation: Some(ViolationJson::from_violation(violation)),
            tolerances: *tol,
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { rho, sigma, tol } => {
            let tols = tol.tolerances();
            let rho = read_density(&rho, &tols)?;
            let sigma = read_density(&sigma, &tols)?;
            let decision = decide_transition(&rho, &sigma, &tols).map_err(|e| e.to_string())?;
            let doc = decision_document(&decision, &tols);
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(if decision.is_feasible() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INFEASIBLE)
            })
        }
        Command::Synthesize { rho, sigma, tol } => {
            let tols = tol.tolerances();
            let rho = read_density(&rho, &tols)?;
            let sigma = read_density(&sigma, &tols)?;
            let decision = decide_transition(&rho, &sigma, &tols).map_err(|e| e.to_string())?;
            match &decision {
                Decision::Feasible(cert) => {
                    let map = synthesize_cooling_map(cert).map_err(|e| e.to_string())?;
                    let doc = serde_json::json!({
                        "feasible": true,
                        "certificate": CertificateJson::from_certificate(cert),
                        "map": CoolingMapJson::from_map(&map),
                        "tolerances": tols,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(ExitCode::SUCCESS)
                }
                Decision::Infeasible(_) => {
                    let doc = decision_document(&decision, &tols);
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(ExitCode::from(EXIT_INFEASIBLE))
                }
            }
        }
        Command::Dilate { map, energies, samples, seed, tol } => {
            let tols = tol.tolerances();
            let text = fs::read_to_string(&map).map_err(|e| format!("{}: {e}", map.display()))?;
            let input: DilateInputJson =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", map.display()))?;
            let dim = match &input {
                DilateInputJson::Single(m) => m.dim,
                DilateInputJson::Mixture { mixture } => {
                    mixture.first().map(|c| c.map.dim).unwrap_or(0)
                }
            };
            if dim < 2 {
                return Err("map must have dimension at least 2".into());
            }
            let spectrum = match energies {
                Some(path) => {
                    let text =
                        fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    let doc: SpectrumJson =
                        serde_json::from_str(&text).map_err(|e| e.to_string())?;
                    doc.to_spectrum(tols.gap_tol).map_err(|e| e.to_string())?
                }
                None => default_spectrum(dim, tols.gap_tol)?,
            };
            let result = match input {
                DilateInputJson::Single(doc) => {
                    let cooling_map = doc.to_map().map_err(|e| e.to_string())?;
                    if !is_optimally_coherent(&cooling_map, tols.psd_tol) {
                        let report = serde_json::json!({
                            "error": "not_optimally_coherent",
                            "detail": "map has Gramian rank above 1; dilate a rational mixture instead",
                        });
                        println!("{}", serde_json::to_string_pretty(&report).unwrap());
                        return Ok(ExitCode::from(EXIT_STRUCTURAL));
                    }
                    build_thermal_dilation(&cooling_map, &spectrum, &tols)
                        .map(|d| (d, vec![(1u64, 1u64, cooling_map)]))
                }
                DilateInputJson::Mixture { mixture } => {
                    let mut maps = Vec::new();
                    let mut weights = Vec::new();
                    for comp in mixture {
                        maps.push(comp.map.to_map().map_err(|e| e.to_string())?);
                        weights.push((comp.num, comp.den));
                    }
                    build_mixture_dilation(&maps, &weights, &spectrum, &tols).map(|d| {
                        let tagged = weights
                            .iter()
                            .zip(maps)
                            .map(|(&(n, dn), m)| (n, dn, m))
                            .collect();
                        (d, tagged)
                    })
                }
            };
            let (dilation, components) = match result {
                Ok(pair) => pair,
                Err(
                    err @ (DilationError::NotOptimallyCoherent { .. }
                    | DilationError::WeightsNotNormalized { .. }
                    | DilationError::BadWeights
                    | DilationError::CompletenessDefect { .. }),
                ) => {
                    let report = serde_json::json!({ "error": err.to_string() });
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    return Ok(ExitCode::from(EXIT_STRUCTURAL));
                }
                Err(err) => return Err(err.to_string()),
            };
            if dilation.joint_dim() > 4096 {
                eprintln!(
                    "warning: joint dimension {} exceeds 4096; the serialized unitary is large",
                    dilation.joint_dim()
                );
            }
            // Verify against the weighted mixture of the component channels.
            let expected = mixture_kraus(&components);
            let report = verify_dilation(&dilation, &expected, samples, seed, &tols);
            let doc = DilationJson::from_dilation(&dilation, &report);
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Monotones { rho, tol } => {
            let tols = tol.tolerances();
            let rho = read_density(&rho, &tols)?;
            let canonical = canonical_params(&rho);
            let schur = schur_complement(&canonical, &tols).map_err(|e| e.to_string())?;
            let doc = MonotonesJson {
                nu_i: nu_i(&rho),
                nu_c: nu_c(&rho, &tols).map_err(|e| e.to_string())?,
                alpha: canonical.alpha,
                schur,
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Region { x, samples, seed, out, raw, tol } => {
            if !(0.0..=0.5).contains(&x) {
                return Err(format!("x must lie in [0, 1/2], got {x}"));
            }
            let tols = tol.tolerances();
            let rho = qubit_family_state(x, &tols)?;
            let cfg = SamplerConfig { seed, dim: 2, n_diag: 2, trials: samples, resolution: 1e-3 };
            let points = reachable_region_scan(&rho, &cfg, &tols);
            let csv = region_csv(x, &points, raw);
            if out.as_os_str() == "-" {
                print!("{csv}");
            } else {
                fs::write(&out, &csv).map_err(|e| format!("{}: {e}", out.display()))?;
                let summary = serde_json::json!({
                    "written": out.display().to_string(),
                    "x": x,
                    "points": points.len(),
                    "raw": raw,
                    "seed": seed,
                    "tolerances": tols,
                });
                println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ThermoLimit { u, v, energies, betas, tol } => {
            let tols = tol.tolerances();
            let read_vector = |path: &PathBuf| -> Result<_, String> {
                let text =
                    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let doc: VectorJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
                doc.to_probability(tols.prob_tol.max(1e-9)).map_err(|e| e.to_string())
            };
            let u = read_vector(&u)?;
            let v = read_vector(&v)?;
            let text = fs::read_to_string(&energies)
                .map_err(|e| format!("{}: {e}", energies.display()))?;
            let doc: SpectrumJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let spectrum = doc.to_spectrum(tols.gap_tol).map_err(|e| e.to_string())?;
            if betas.is_empty() {
                return Err("provide at least one β via --betas".into());
            }
            let rows = beta_sweep_limit(&u, &v, &spectrum, &betas, tols.stoch_tol)
                .map_err(|e| e.to_string())?;
            let table: Vec<_> = rows
                .iter()
                .map(|r| serde_json::json!({ "beta": r.beta, "thermo": r.thermo, "ut": r.ut }))
                .collect();
            let doc = serde_json::json!({ "table": table, "tolerances": tols });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzz { dim, trials, seed, n_diag, tol } => {
            if dim < 2 {
                return Err("dimension must be at least 2".into());
            }
            let tols = tol.tolerances();
            let cfg = SamplerConfig {
                seed,
                dim,
                n_diag: n_diag.unwrap_or(dim).clamp(1, dim),
                trials,
                resolution: 1e-3,
            };
            let report = necessity_fuzz(&cfg, &tols);
            for violation in &report.violations {
                println!("{}", serde_json::to_string(violation).unwrap());
            }
            let summary = serde_json::json!({
                "trials": report.trials,
                "dim": report.dim,
                "violations": report.violations.len(),
                "seed": seed,
                "tolerances": tols,
            });
            println!("{}", serde_json::to_string(&summary).unwrap());
            Ok(if report.violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INFEASIBLE)
            })
        }
    }
}

/// ρ(x) = ½|E_1⟩⟨E_1| + x(|E_1⟩⟨E_2| + h.c.) + ½|E_2⟩⟨E_2|.
fn qubit_family_state(x: f64, tols: &ToleranceSet) -> Result<DensityMatrix, String> {
    let doc = MatrixJson {
        dim: 2,
        re: vec![0.5, x, x, 0.5],
        im: vec![0.0; 4],
    };
    DensityMatrix::new(doc.to_matrix().map_err(|e| e.to_string())?, tols)
        .map_err(|e| e.to_string())
}

/// Strictly increasing energies with generic gaps for any dimension.
fn default_spectrum(
    dim: usize,
    gap_tol: f64,
) -> Result<coolmap::quantum::EnergySpectrum, String> {
    let mut energies = Vec::with_capacity(dim);
    let mut acc = 0.0;
    for i in 0..dim {
        energies.push(acc);
        acc += 1.0 + 0.3 * (i as f64) * (i as f64 + 1.0) / 2.0;
    }
    coolmap::quantum::EnergySpectrum::new(energies, gap_tol).map_err(|e| e.to_string())
}

/// The Kraus set of a rational mixture `Σ (m/g) E_i`: each component's
/// operators scaled by `√(m/g)`.
fn mixture_kraus(components: &[(u64, u64, CoolingMap)]) -> coolmap::quantum::KrausSet {
    let mut ops = Vec::new();
    for (num, den, map) in components {
        let weight = (*num as f64 / *den as f64).sqrt();
        for op in coolmap::cooling::kraus_of(map).operators() {
            ops.push(op * coolmap::linalg::C64::new(weight, 0.0));
        }
    }
    coolmap::quantum::KrausSet::new(ops).expect("component operators share one shape")
}

fn region_csv(x: f64, points: &[coolmap::oracle::RegionPoint], raw: bool) -> String {
    let mut rows: Vec<(String, f64, f64)> = Vec::new();
    if raw {
        for p in points {
            rows.push((model_name(p.model).to_string(), p.y, p.beta));
        }
    } else {
        // Bin on a 200x200 grid over [0,1]² and emit unique cells.
        let mut seen = std::collections::BTreeSet::new();
        for p in points {
            let by = (p.y.clamp(0.0, 1.0) * 200.0).floor().min(199.0) as usize;
            let bb = (p.beta.clamp(0.0, 1.0) * 200.0).floor().min(199.0) as usize;
            let key = (model_name(p.model), by, bb);
            if seen.insert(key) {
                rows.push((
                    model_name(p.model).to_string(),
                    (by as f64 + 0.5) / 200.0,
                    (bb as f64 + 0.5) / 200.0,
                ));
            }
        }
    }
    let mut csv = String::from("model,x,y,beta,y_cooling_bound,y_gp_bound\n");
    for (model, y, beta) in rows {
        let cb = cooling_boundary(x, beta);
        let gb = gp_boundary(x, beta);
        csv.push_str(&format!("{model},{x},{y},{beta},{cb},{gb}\n"));
    }
    csv
}

fn model_name(model: RegionModel) -> &'static str {
    match model {
        RegionModel::Cooling => "cooling",
        RegionModel::Gp => "gp",
    }
}
