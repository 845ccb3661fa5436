//! C ABI over the coolmap library.
//!
//! States travel as JSON documents (`{"dim", "re", "im"}` row-major complex
//! matrices) and are held behind opaque handles. Every function returns a
//! [`CmStatus`] code; strings returned through out-parameters are allocated
//! by this library and must be released with [`cm_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use coolmap::cooling::{decide_transition, synthesize_cooling_map, Decision};
use coolmap::gibbs::{canonical_params, nu_c, nu_i, schur_complement};
use coolmap::json::{
    self, CertificateJson, CoolingMapJson, DecisionJson, MonotonesJson, ViolationJson,
};
use coolmap::quantum::DensityMatrix;
use coolmap::ToleranceSet;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    /// Success; for feasibility checks, the transition is feasible.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The JSON document failed to parse or validate.
    ParseError = 3,
    /// The transition is infeasible (the decision document explains why).
    Infeasible = 4,
    /// An internal invariant failed.
    InternalError = 5,
}

/// Opaque handle to a validated density matrix.
pub struct CmDensity {
    inner: DensityMatrix,
    tolerances: ToleranceSet,
}

fn parse_cstr<'a>(ptr: *const c_char) -> Result<&'a str, CmStatus> {
    if ptr.is_null() {
        return Err(CmStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| CmStatus::InvalidUtf8)
}

fn emit_string(out: *mut *mut c_char, text: String) -> CmStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            CmStatus::Ok
        }
        Err(_) => CmStatus::InternalError,
    }
}

/// Parse and validate a density matrix from a JSON document.
///
/// `psd_tol` scales the whole tolerance block (pass 0 for the defaults).
/// On success, writes a handle to `out`; release it with
/// [`cm_density_free`].
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_density_from_json(
    json: *const c_char,
    psd_tol: f64,
    out: *mut *mut CmDensity,
) -> CmStatus {
    if out.is_null() {
        return CmStatus::NullPointer;
    }
    unsafe { *out = ptr::null_mut() };
    let text = match parse_cstr(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let tolerances = if psd_tol > 0.0 {
        ToleranceSet::with_decision_tol(psd_tol)
    } else {
        ToleranceSet::default()
    };
    match json::density_from_json(text, &tolerances) {
        Ok(inner) => {
            let handle = Box::new(CmDensity { inner, tolerances });
            unsafe { *out = Box::into_raw(handle) };
            CmStatus::Ok
        }
        Err(_) => CmStatus::ParseError,
    }
}

/// Release a density-matrix handle. Null is ignored.
///
/// # Safety
/// `handle` must have come from [`cm_density_from_json`] and not have been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn cm_density_free(handle: *mut CmDensity) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Dimension of the state behind a handle; 0 for null.
///
/// # Safety
/// `handle` must be a live handle from [`cm_density_from_json`] or null.
#[no_mangle]
pub unsafe extern "C" fn cm_density_dim(handle: *const CmDensity) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inner.dim()
}

/// Decide feasibility of `rho -> sigma` under cooling maps.
///
/// Writes the decision document (certificate or violation) to `out_json`.
/// Returns `Ok` when feasible, `Infeasible` when not.
///
/// # Safety
/// Both handles must be live; `out_json` must point to writable storage for
/// one pointer. Free the returned string with [`cm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cm_decide_transition(
    rho: *const CmDensity,
    sigma: *const CmDensity,
    out_json: *mut *mut c_char,
) -> CmStatus {
    if rho.is_null() || sigma.is_null() || out_json.is_null() {
        return CmStatus::NullPointer;
    }
    unsafe { *out_json = ptr::null_mut() };
    let rho = unsafe { &*rho };
    let sigma = unsafe { &*sigma };
    let decision = match decide_transition(&rho.inner, &sigma.inner, &rho.tolerances) {
        Ok(d) => d,
        Err(_) => return CmStatus::ParseError,
    };
    let (feasible, document) = match &decision {
        Decision::Feasible(cert) => (
            true,
            DecisionJson {
                feasible: true,
                certificate: Some(CertificateJson::from_certificate(cert)),
                violation: None,
                tolerances: rho.tolerances,
            },
        ),
        Decision::Infeasible(violation) => (
            false,
            DecisionJson {
                feasible: false,
                certificate: None,
                violation: Some(ViolationJson::from_violation(violation)),
                tolerances: rho.tolerances,
            },
        ),
    };
    let text = match serde_json::to_string_pretty(&document) {
        Ok(t) => t,
        Err(_) => return CmStatus::InternalError,
    };
    let status = emit_string(out_json, text);
    if status != CmStatus::Ok {
        return status;
    }
    if feasible {
        CmStatus::Ok
    } else {
        CmStatus::Infeasible
    }
}

/// Synthesize an explicit cooling map for a feasible transition and write
/// it as JSON. Returns `Infeasible` (with the decision document) when no
/// map exists.
///
/// # Safety
/// Same contract as [`cm_decide_transition`].
#[no_mangle]
pub unsafe extern "C" fn cm_synthesize_map(
    rho: *const CmDensity,
    sigma: *const CmDensity,
    out_json: *mut *mut c_char,
) -> CmStatus {
    if rho.is_null() || sigma.is_null() || out_json.is_null() {
        return CmStatus::NullPointer;
    }
    unsafe { *out_json = ptr::null_mut() };
    let rho = unsafe { &*rho };
    let sigma = unsafe { &*sigma };
    let decision = match decide_transition(&rho.inner, &sigma.inner, &rho.tolerances) {
        Ok(d) => d,
        Err(_) => return CmStatus::ParseError,
    };
    match decision {
        Decision::Feasible(cert) => {
            let map = match synthesize_cooling_map(&cert) {
                Ok(m) => m,
                Err(_) => return CmStatus::InternalError,
            };
            let doc = serde_json::json!({
                "feasible": true,
                "certificate": CertificateJson::from_certificate(&cert),
                "map": CoolingMapJson::from_map(&map),
            });
            emit_string(out_json, serde_json::to_string_pretty(&doc).unwrap())
        }
        Decision::Infeasible(violation) => {
            let doc = serde_json::json!({
                "feasible": false,
                "violation": ViolationJson::from_violation(&violation),
            });
            let status = emit_string(out_json, serde_json::to_string_pretty(&doc).unwrap());
            if status != CmStatus::Ok {
                status
            } else {
                CmStatus::Infeasible
            }
        }
    }
}

/// Gibbs-preserving monotones of a state, as
/// `{"nu_I", "nu_C", "alpha", "schur"}`.
///
/// # Safety
/// `rho` must be live; `out_json` must point to writable storage for one
/// pointer. Free the returned string with [`cm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cm_monotones(
    rho: *const CmDensity,
    out_json: *mut *mut c_char,
) -> CmStatus {
    if rho.is_null() || out_json.is_null() {
        return CmStatus::NullPointer;
    }
    unsafe { *out_json = ptr::null_mut() };
    let rho = unsafe { &*rho };
    let canonical = canonical_params(&rho.inner);
    let schur = match schur_complement(&canonical, &rho.tolerances) {
        Ok(c) => c,
        Err(_) => return CmStatus::ParseError,
    };
    let nu_c_value = match nu_c(&rho.inner, &rho.tolerances) {
        Ok(v) => v,
        Err(_) => return CmStatus::ParseError,
    };
    let doc = MonotonesJson {
        nu_i: nu_i(&rho.inner),
        nu_c: nu_c_value,
        alpha: canonical.alpha,
        schur,
    };
    emit_string(out_json, serde_json::to_string_pretty(&doc).unwrap())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a coolmap function and not freed already.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn cm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
