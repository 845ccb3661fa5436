//! Decide, synthesize and verify quantum state transitions under *cooling
//! maps* — the channels that arise as the low-temperature limit of thermal
//! operations.
//!
//! The crate is organised around the transition-feasibility question for a
//! pair of density matrices `(ρ, σ)` on a system with a non-degenerate,
//! generic-gap energy spectrum:
//!
//! * [`quantum`] — validated matrix types (density matrices, Kraus sets,
//!   unitaries, energy spectra) and the numerically careful primitives
//!   everything else is built on: PSD witnesses, Gram-vector extraction,
//!   channel application, completeness and energy-conservation checks.
//! * [`majorization`] — the upper-triangular (UT) majorization partial order
//!   on probability vectors, the constructive upper-triangular
//!   column-stochastic transfer matrix, and thermo-majorization at finite
//!   inverse temperature together with its zero-temperature limit.
//! * [`cooling`] — feasibility decisions with explicit certificates, Kraus
//!   synthesis of a map realizing a feasible transition, the
//!   maximally-coherent reachable target, and the Cauchy–Schwarz coherence
//!   transfer bound.
//! * [`dilation`] — ancilla spectra and energy-conserving unitaries that
//!   realize optimally coherent maps (and rational mixtures of them) as
//!   genuine thermal operations, plus verification by partial trace.
//! * [`gibbs`] — low-temperature Gibbs-preserving operations: canonical
//!   state parametrization, Schur-complement quantity, the two
//!   nonequilibrium monotones, and constructive two-level synthesis.
//! * [`oracle`] — seeded randomized samplers of valid cooling maps and
//!   Gibbs-preserving channels, used as independent ground truth against
//!   every feasibility decision and monotone in the test suites.
//!
//! All types are immutable values and all operations are pure functions of
//! their inputs (plus an explicit seed where random), so concurrent use is
//! unrestricted.

pub mod cooling;
pub mod dilation;
pub mod gibbs;
pub mod json;
pub mod linalg;
pub mod majorization;
pub mod oracle;
pub mod quantum;
pub mod tol;

pub use tol::ToleranceSet;
