#ifndef KERR_FVR_H
#define KERR_FVR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KfDynamicsKind {
  KF_DYNAMICS_KIND_KERR = 0,
  KF_DYNAMICS_KIND_HARMONIC = 1,
} KfDynamicsKind;

typedef enum KfMaslov {
  KF_MASLOV_WINDING = 0,
  KF_MASLOV_PER_ZERO = 1,
  KF_MASLOV_SIGNED_CROSSING = 2,
} KfMaslov;

typedef enum KfStateKind {
  KF_STATE_KIND_COHERENT = 0,
  KF_STATE_KIND_DISPLACED_FOCK = 1,
} KfStateKind;

// Status codes. Zero is success.
typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_INVALID_ARGUMENT = 2,
  KF_STATUS_INVALID_GRID = 3,
  KF_STATUS_DOMAIN = 4,
  KF_STATUS_TRUNCATION = 5,
  KF_STATUS_NOT_CONVERGED = 6,
  KF_STATUS_IO = 7,
  KF_STATUS_FORMAT = 8,
  KF_STATUS_PANIC = 9,
} KfStatus;

// Opaque real field on a grid.
typedef struct KfField KfField;

// Chord-plane quadrature settings. Non-positive `chord_halfwidth` picks
// the half-width from the grid; non-positive `convergence_tolerance`
// disables the `M/2` check.
typedef struct KfQuadrature {
  double chord_halfwidth;
  size_t chord_samples;
  size_t maslov_time_samples;
  double chi_cutoff;
  double refine_bisection_tol;
  enum KfMaslov maslov;
  double convergence_tolerance;
} KfQuadrature;

// Initial state: a coherent state, or a Fock state `|n⟩` displaced to
// `(q, p)`. `n` is ignored for coherent states.
typedef struct KfState {
  enum KfStateKind kind;
  uint32_t n;
  double q;
  double p;
} KfState;

// Node-centered grid over `[q_min, q_max] × [p_min, p_max]`.
typedef struct KfGrid {
  double q_min;
  double q_max;
  double p_min;
  double p_max;
  size_t n_q;
  size_t n_p;
} KfGrid;

// `omega0` is only read for the harmonic oscillator.
typedef struct KfDynamics {
  enum KfDynamicsKind kind;
  double omega0;
} KfDynamics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next failing call on the same thread.
const char *kf_last_error(void);

// Library version as a static NUL-terminated string.
const char *kf_version(void);

// Fill `out` with the default quadrature settings.
//
// # Safety
// `out` must be null or valid for writes.
enum KfStatus kf_quadrature_default(struct KfQuadrature *out);

// Initial Wigner function at `(q, p)`.
//
// # Safety
// `state` must be null or point to a valid `KfState`; `out` must be null
// or valid for writes.
enum KfStatus kf_wigner0(const struct KfState *state, double q, double p, double *out);

// Chord function `χ(ξ)` of the initial state, as real and imaginary parts.
//
// # Safety
// `state` must be null or valid; `re` and `im` must be null or valid for
// writes.
enum KfStatus kf_chord_fn(const struct KfState *state,
                          double xi_q,
                          double xi_p,
                          double *re,
                          double *im);

// Exact squared autocorrelation `|⟨ψ(0)|ψ(t)⟩|²` with `truncation` Fock
// levels.
//
// # Safety
// `state` must be null or valid; `out` must be null or valid for writes.
enum KfStatus kf_autocorr_exact(const struct KfState *state,
                                size_t truncation,
                                double t,
                                double *out);

// Exact Wigner function at time `t` under the Kerr Hamiltonian.
//
// # Safety
// Pointer arguments must be null or valid; on success `*out` receives a
// handle to release with `kf_field_free`.
enum KfStatus kf_quantum_field(const struct KfState *state,
                               size_t truncation,
                               double t,
                               const struct KfGrid *grid,
                               struct KfField **out);

// Semiclassical Wigner function by the final value representation.
// `imaginary` may be null; when given it receives the field of absolute
// imaginary residues. `unconverged` may be null.
//
// # Safety
// Pointer arguments must be null or valid. Returned handles must be
// released with `kf_field_free`.
enum KfStatus kf_fvr_field(const struct KfState *state,
                           const struct KfDynamics *dynamics,
                           const struct KfQuadrature *quadrature,
                           double t,
                           const struct KfGrid *grid,
                           struct KfField **out,
                           struct KfField **imaginary,
                           size_t *unconverged);

// Classical Liouville transport of the initial Wigner function.
//
// # Safety
// Pointer arguments must be null or valid.
enum KfStatus kf_liouville_field(const struct KfState *state,
                                 const struct KfDynamics *dynamics,
                                 double t,
                                 const struct KfGrid *grid,
                                 struct KfField **out);

// `det ∂ξ/∂ξ′` over a grid of final chords at final center `(x_q, x_p)`.
//
// # Safety
// Pointer arguments must be null or valid.
enum KfStatus kf_caustic_det_map(double x_q,
                                 double x_p,
                                 double t,
                                 const struct KfGrid *chord_grid,
                                 const struct KfDynamics *dynamics,
                                 struct KfField **out);

// Grid of a field.
//
// # Safety
// `field` must be null or a live handle; `out` null or valid for writes.
enum KfStatus kf_field_grid(const struct KfField *field, struct KfGrid *out);

// Pointer to the `n_q·n_p` values, row-major with `q` fastest. Owned by
// the handle; null if `field` is null.
//
// # Safety
// `field` must be null or a live handle.
const double *kf_field_values(const struct KfField *field);

// Trapezoid-rule integral of a field.
//
// # Safety
// `field` must be null or a live handle; `out` null or valid for writes.
enum KfStatus kf_field_integral(const struct KfField *field, double *out);

// Write a field in the binary grid format.
//
// # Safety
// `field` must be null or a live handle; `path` null or NUL-terminated.
enum KfStatus kf_field_write(const struct KfField *field, const char *path);

// Read a grid file; complex files yield their real part.
//
// # Safety
// `path` must be null or NUL-terminated; `out` null or valid for writes.
enum KfStatus kf_field_read(const char *path, struct KfField **out);

// Release a field handle. Null is ignored.
//
// # Safety
// `field` must be null or a handle not yet freed.
void kf_field_free(struct KfField *field);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KERR_FVR_H */
