#ifndef COOLMAP_H
#define COOLMAP_H

/* Generated by cbindgen from coolmap-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum CmStatus {
  // Success; for feasibility checks, the transition is feasible.
  CM_STATUS_OK = 0,
  // A required pointer argument was null.
  CM_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  CM_STATUS_INVALID_UTF8 = 2,
  // The JSON document failed to parse or validate.
  CM_STATUS_PARSE_ERROR = 3,
  // The transition is infeasible (the decision document explains why).
  CM_STATUS_INFEASIBLE = 4,
  // An internal invariant failed.
  CM_STATUS_INTERNAL_ERROR = 5,
} CmStatus;

// Opaque handle to a validated density matrix.
typedef struct CmDensity CmDensity;

// Parse and validate a density matrix from a JSON document.
//
// `psd_tol` scales the whole tolerance block (pass 0 for the defaults).
// On success, writes a handle to `out`; release it with
// [`cm_density_free`].
//
// # Safety
// `json` must point to a NUL-terminated string and `out` to writable
// storage for one pointer.
enum CmStatus cm_density_from_json(const char *json, double psd_tol, struct CmDensity **out);

// Release a density-matrix handle. Null is ignored.
//
// # Safety
// `handle` must have come from [`cm_density_from_json`] and not have been
// freed already.
void cm_density_free(struct CmDensity *handle);

// Dimension of the state behind a handle; 0 for null.
//
// # Safety
// `handle` must be a live handle from [`cm_density_from_json`] or null.
uintptr_t cm_density_dim(const struct CmDensity *handle);

// Decide feasibility of `rho -> sigma` under cooling maps.
//
// Writes the decision document (certificate or violation) to `out_json`.
// Returns `Ok` when feasible, `Infeasible` when not.
//
// # Safety
// Both handles must be live; `out_json` must point to writable storage for
// one pointer. Free the returned string with [`cm_string_free`].
enum CmStatus cm_decide_transition(const struct CmDensity *rho,
                                   const struct CmDensity *sigma,
                                   char **out_json);

// Synthesize an explicit cooling map for a feasible transition and write
// it as JSON. Returns `Infeasible` (with the decision document) when no
// map exists.
//
// # Safety
// Same contract as [`cm_decide_transition`].
enum CmStatus cm_synthesize_map(const struct CmDensity *rho,
                                const struct CmDensity *sigma,
                                char **out_json);

// Gibbs-preserving monotones of a state, as
// `{"nu_I", "nu_C", "alpha", "schur"}`.
//
// # Safety
// `rho` must be live; `out_json` must point to writable storage for one
// pointer. Free the returned string with [`cm_string_free`].
enum CmStatus cm_monotones(const struct CmDensity *rho, char **out_json);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have been returned by a coolmap function and not freed already.
void cm_string_free(char *s);

// Library version as a static string; do not free.
const char *cm_version(void);

#endif  /* COOLMAP_H */
