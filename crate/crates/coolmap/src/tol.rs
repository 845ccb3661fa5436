//! Numerical tolerances, threaded explicitly through every validation and
//! decision in the crate.

use serde::{Deserialize, Serialize};

/// One block of tolerances shared by all modules.
///
/// The defaults are sized for `f64` arithmetic on the small dense matrices
/// this crate targets (dimension up to a few dozen). Validation-style checks
/// (Hermiticity, unit trace) sit at `1e-10`; decision-style checks (PSD,
/// completeness, unitarity, stochasticity) at `1e-9`; and `zero_tol` is the
/// much stricter threshold below which a matrix element is treated as an
/// exact structural zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSet {
    /// Max allowed `|m_jk - conj(m_kj)|` for a matrix to count as Hermitian.
    pub herm_tol: f64,
    /// Max allowed `|Tr ρ - 1|` for a density matrix.
    pub trace_tol: f64,
    /// Relative floor on the minimum eigenvalue for PSD decisions.
    pub psd_tol: f64,
    /// Max allowed `‖Σ K_i†K_i - I‖_max` for a Kraus set to count as complete.
    pub comp_tol: f64,
    /// Max allowed `‖U†U - I‖_max` for a unitary.
    pub unit_tol: f64,
    /// Minimum separation between energy levels and between distinct gaps.
    pub gap_tol: f64,
    /// Slack on probability-vector nonnegativity and normalization.
    pub prob_tol: f64,
    /// Slack on column sums and entry ranges of stochastic matrices.
    pub stoch_tol: f64,
    /// Threshold below which a matrix element is treated as exactly zero.
    pub zero_tol: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            herm_tol: 1e-10,
            trace_tol: 1e-10,
            psd_tol: 1e-9,
            comp_tol: 1e-9,
            unit_tol: 1e-9,
            gap_tol: 1e-9,
            prob_tol: 1e-10,
            stoch_tol: 1e-9,
            zero_tol: 1e-12,
        }
    }
}

impl ToleranceSet {
    /// Scale every tolerance by `factor`, preserving the ratios between the
    /// validation, decision and zero thresholds.
    pub fn scaled(factor: f64) -> Self {
        let base = ToleranceSet::default();
        ToleranceSet {
            herm_tol: base.herm_tol * factor,
            trace_tol: base.trace_tol * factor,
            psd_tol: base.psd_tol * factor,
            comp_tol: base.comp_tol * factor,
            unit_tol: base.unit_tol * factor,
            gap_tol: base.gap_tol * factor,
            prob_tol: base.prob_tol * factor,
            stoch_tol: base.stoch_tol * factor,
            zero_tol: base.zero_tol * factor,
        }
    }

    /// Tolerance block whose decision tolerance (`psd_tol`) equals `psd_tol`,
    /// with all other thresholds rescaled proportionally.
    pub fn with_decision_tol(psd_tol: f64) -> Self {
        Self::scaled(psd_tol / ToleranceSet::default().psd_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_preserves_ratios() {
        let t = ToleranceSet::scaled(10.0);
        assert_eq!(t.psd_tol, 1e-8);
        assert_eq!(t.herm_tol, 1e-9);
        assert_eq!(t.zero_tol, 1e-11);
    }

    #[test]
    fn with_decision_tol_pins_psd() {
        let t = ToleranceSet::with_decision_tol(1e-6);
        assert!((t.psd_tol - 1e-6).abs() < 1e-20);
    }
}
