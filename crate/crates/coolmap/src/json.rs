//! JSON representations of the crate's value types, shared by the CLI and
//! the C API.
//!
//! Complex matrices are carried as `{"dim": d, "re": [...], "im": [...]}`
//! with row-major entry arrays; probability vectors as
//! `{"dim": d, "w": [...]}`; complex vectors as `{"re": [...], "im": [...]}`.

use serde::{Deserialize, Serialize};

use crate::cooling::{CoolingMap, TransitionCertificate, Violation};
use crate::dilation::{AncillaSpec, DilationReport, ThermalDilation};
use crate::linalg::{CMat, CVec, C64};
use crate::majorization::{ProbabilityVector, UtcsMatrix};
use crate::quantum::{DensityMatrix, EnergySpectrum, HermitianMatrix, UnitaryMatrix};
use crate::tol::ToleranceSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JsonError {
    #[error("field lengths disagree: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Row-major complex matrix document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let dim = m.nrows();
        let mut re = Vec::with_capacity(dim * dim);
        let mut im = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                re.push(m[(r, c)].re);
                im.push(m[(r, c)].im);
            }
        }
        MatrixJson { dim, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMat, JsonError> {
        let n = self.dim * self.dim;
        if self.re.len() != n {
            return Err(JsonError::LengthMismatch { expected: n, got: self.re.len() });
        }
        if self.im.len() != n {
            return Err(JsonError::LengthMismatch { expected: n, got: self.im.len() });
        }
        Ok(CMat::from_fn(self.dim, self.dim, |r, c| {
            C64::new(self.re[r * self.dim + c], self.im[r * self.dim + c])
        }))
    }

    pub fn from_real(dim: usize, entries: impl Fn(usize, usize) -> f64) -> Self {
        let mut re = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                re.push(entries(r, c));
            }
        }
        MatrixJson { dim, re, im: vec![0.0; dim * dim] }
    }
}

/// Probability-vector document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub w: Vec<f64>,
}

impl VectorJson {
    pub fn from_probability(p: &ProbabilityVector) -> Self {
        VectorJson { dim: p.dim(), w: p.weights().to_vec() }
    }

    pub fn to_probability(&self, prob_tol: f64) -> Result<ProbabilityVector, JsonError> {
        if self.w.len() != self.dim {
            return Err(JsonError::LengthMismatch { expected: self.dim, got: self.w.len() });
        }
        ProbabilityVector::new(self.w.clone(), prob_tol)
            .map_err(|e| JsonError::Invalid(e.to_string()))
    }
}

/// Complex-vector document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexVectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexVectorJson {
    pub fn from_vector(v: &CVec) -> Self {
        ComplexVectorJson {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<CVec, JsonError> {
        if self.re.len() != self.im.len() {
            return Err(JsonError::LengthMismatch {
                expected: self.re.len(),
                got: self.im.len(),
            });
        }
        Ok(CVec::from_iterator(
            self.re.len(),
            self.re.iter().zip(&self.im).map(|(&re, &im)| C64::new(re, im)),
        ))
    }
}

/// Energy-spectrum document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub energies: Vec<f64>,
}

impl SpectrumJson {
    pub fn from_spectrum(s: &EnergySpectrum) -> Self {
        SpectrumJson { energies: s.energies().to_vec() }
    }

    pub fn to_spectrum(&self, gap_tol: f64) -> Result<EnergySpectrum, JsonError> {
        EnergySpectrum::new(self.energies.clone(), gap_tol)
            .map_err(|e| JsonError::Invalid(e.to_string()))
    }
}

/// Cooling-map document: λ vectors plus `μ_{jk}` coefficients for `j < k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoolingMapJson {
    pub dim: usize,
    pub n_diag: usize,
    pub lambda: Vec<ComplexVectorJson>,
    pub mu: Vec<MuEntryJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuEntryJson {
    pub j: usize,
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

impl CoolingMapJson {
    pub fn from_map(map: &CoolingMap) -> Self {
        let d = map.dim();
        let mut mu = Vec::new();
        for k in 0..d {
            for j in 0..k {
                let z = map.mu()[(j, k)];
                if z.norm() > 0.0 {
                    mu.push(MuEntryJson { j, k, re: z.re, im: z.im });
                }
            }
        }
        CoolingMapJson {
            dim: d,
            n_diag: map.n_diag(),
            lambda: map.lambda().iter().map(ComplexVectorJson::from_vector).collect(),
            mu,
        }
    }

    pub fn to_map(&self) -> Result<CoolingMap, JsonError> {
        if self.lambda.len() != self.dim {
            return Err(JsonError::LengthMismatch {
                expected: self.dim,
                got: self.lambda.len(),
            });
        }
        let lambda: Result<Vec<CVec>, JsonError> =
            self.lambda.iter().map(|l| l.to_vector()).collect();
        let lambda = lambda?;
        for l in &lambda {
            if l.len() != self.n_diag {
                return Err(JsonError::LengthMismatch { expected: self.n_diag, got: l.len() });
            }
        }
        let mut mu = CMat::zeros(self.dim, self.dim);
        for entry in &self.mu {
            if entry.j >= entry.k || entry.k >= self.dim {
                return Err(JsonError::Invalid(format!(
                    "μ index ({}, {}) is not strictly upper-triangular in dimension {}",
                    entry.j, entry.k, self.dim
                )));
            }
            mu[(entry.j, entry.k)] = C64::new(entry.re, entry.im);
        }
        CoolingMap::new(lambda, mu).map_err(|e| JsonError::Invalid(e.to_string()))
    }
}

/// Certificate document: the `(P, Q)` pair, PSD witness and Gram vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(rename = "P")]
    pub p: MatrixJson,
    #[serde(rename = "Q")]
    pub q: MatrixJson,
    pub min_eig_q: f64,
    pub lambda: Vec<ComplexVectorJson>,
}

impl CertificateJson {
    pub fn from_certificate(cert: &TransitionCertificate) -> Self {
        let d = cert.p.dim();
        CertificateJson {
            p: MatrixJson::from_real(d, |r, c| cert.p.entry(r, c)),
            q: MatrixJson::from_matrix(cert.q.matrix()),
            min_eig_q: cert.min_eig_q,
            lambda: cert.gram.iter().map(ComplexVectorJson::from_vector).collect(),
        }
    }
}

/// Decision document emitted by `check` and `synthesize`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionJson {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationJson>,
    pub tolerances: ToleranceSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationJson {
    ZeroCoherenceMismatch { row: usize, col: usize, magnitude: f64 },
    NotUtMajorized { index: usize },
    QNotPsd { min_eig: f64 },
    NoPsdCompletionFound,
}

impl ViolationJson {
    pub fn from_violation(v: &Violation) -> Self {
        match *v {
            Violation::ZeroCoherenceMismatch { row, col, magnitude } => {
                ViolationJson::ZeroCoherenceMismatch { row, col, magnitude }
            }
            Violation::NotUtMajorized { index } => ViolationJson::NotUtMajorized { index },
            Violation::QNotPsd { min_eig } => ViolationJson::QNotPsd { min_eig },
            Violation::NoPsdCompletionFound => ViolationJson::NoPsdCompletionFound,
        }
    }
}

/// Monotone report for a single state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonesJson {
    #[serde(rename = "nu_I")]
    pub nu_i: f64,
    #[serde(rename = "nu_C")]
    pub nu_c: f64,
    pub alpha: f64,
    pub schur: f64,
}

/// Dilation document: spectra plus the global unitary and its verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationJson {
    pub system: SpectrumJson,
    pub ancilla: AncillaJson,
    #[serde(rename = "U")]
    pub unitary: MatrixJson,
    pub report: DilationReportJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AncillaJson {
    pub ground_multiplicity: usize,
    pub levels: Vec<AncillaLevelJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AncillaLevelJson {
    pub energy: f64,
    pub pair: (usize, usize),
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DilationReportJson {
    pub unitarity_defect: f64,
    pub energy_offblock: f64,
    pub max_channel_deviation: f64,
}

impl DilationJson {
    pub fn from_dilation(d: &ThermalDilation, report: &DilationReport) -> Self {
        DilationJson {
            system: SpectrumJson::from_spectrum(&d.system),
            ancilla: AncillaJson::from_spec(&d.ancilla),
            unitary: MatrixJson::from_matrix(d.unitary.matrix()),
            report: DilationReportJson {
                unitarity_defect: report.unitarity_defect,
                energy_offblock: report.energy_offblock,
                max_channel_deviation: report.max_channel_deviation,
            },
        }
    }
}

impl AncillaJson {
    pub fn from_spec(spec: &AncillaSpec) -> Self {
        AncillaJson {
            ground_multiplicity: spec.ground_multiplicity,
            levels: spec
                .excited
                .iter()
                .map(|l| AncillaLevelJson {
                    energy: l.energy,
                    pair: l.pair,
                    multiplicity: l.multiplicity,
                })
                .collect(),
        }
    }
}

/// Input accepted by the `dilate` command: a bare map, or a declared
/// rational mixture of maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DilateInputJson {
    Mixture { mixture: Vec<MixtureComponentJson> },
    Single(CoolingMapJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureComponentJson {
    pub num: u64,
    pub den: u64,
    pub map: CoolingMapJson,
}

/// Parse helpers shared by the CLI and the C API.
pub fn density_from_json(text: &str, tol: &ToleranceSet) -> Result<DensityMatrix, String> {
    let doc: MatrixJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let m = doc.to_matrix().map_err(|e| e.to_string())?;
    DensityMatrix::new(m, tol).map_err(|e| e.to_string())
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&MatrixJson::from_matrix(rho.matrix()))
        .expect("matrix documents serialize")
}

/// Serialize a Hermitian matrix document (used for Q matrices).
pub fn hermitian_to_json(h: &HermitianMatrix) -> MatrixJson {
    MatrixJson::from_matrix(h.matrix())
}

/// Serialize a UTCS matrix into the complex-matrix schema with zero
/// imaginary part.
pub fn utcs_to_json(p: &UtcsMatrix) -> MatrixJson {
    MatrixJson::from_real(p.dim(), |r, c| p.entry(r, c))
}

/// Serialize a unitary document.
pub fn unitary_to_json(u: &UnitaryMatrix) -> MatrixJson {
    MatrixJson::from_matrix(u.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn matrix_round_trip() {
        let m = CMat::from_fn(3, 3, |r, c| C64::new(r as f64, c as f64));
        let doc = MatrixJson::from_matrix(&m);
        let text = serde_json::to_string(&doc).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert!(max_abs_diff(&back.to_matrix().unwrap(), &m) < 1e-15);
    }

    #[test]
    fn matrix_length_mismatch_is_rejected() {
        let doc = MatrixJson { dim: 2, re: vec![1.0; 3], im: vec![0.0; 4] };
        assert!(doc.to_matrix().is_err());
    }

    #[test]
    fn cooling_map_round_trip() {
        let lambda = vec![
            CVec::from_column_slice(&[C64::new(1.0, 0.0)]),
            CVec::from_column_slice(&[C64::new(0.5, 0.2)]),
        ];
        let mut mu = CMat::zeros(2, 2);
        mu[(0, 1)] = C64::new(0.3, -0.4);
        let map = CoolingMap::new(lambda, mu).unwrap();
        let doc = CoolingMapJson::from_map(&map);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CoolingMapJson = serde_json::from_str(&text).unwrap();
        let map_back = back.to_map().unwrap();
        assert_eq!(map, map_back);
    }

    #[test]
    fn dilate_input_forms() {
        let single = r#"{"dim":2,"n_diag":1,"lambda":[{"re":[1.0],"im":[0.0]},{"re":[1.0],"im":[0.0]}],"mu":[]}"#;
        assert!(matches!(
            serde_json::from_str::<DilateInputJson>(single).unwrap(),
            DilateInputJson::Single(_)
        ));
        let mixture = format!(r#"{{"mixture":[{{"num":1,"den":1,"map":{single}}}]}}"#);
        assert!(matches!(
            serde_json::from_str::<DilateInputJson>(&mixture).unwrap(),
            DilateInputJson::Mixture { .. }
        ));
    }
}
