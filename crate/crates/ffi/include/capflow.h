#ifndef CAPFLOW_H
#define CAPFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define CAPFLOW_OK 0

// A required pointer argument was null.
#define CAPFLOW_NULL_POINTER -1

// A string argument was not valid UTF-8.
#define CAPFLOW_INVALID_UTF8 -2

// An index was out of range.
#define CAPFLOW_OUT_OF_RANGE -3

// The library panicked; this is a bug.
#define CAPFLOW_PANIC -99

// Opaque convex body.
typedef struct CapflowBody CapflowBody;

// Opaque atomic measure on the unit sphere.
typedef struct CapflowMeasure CapflowMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *capflow_last_error_message(void);

// Parses a body document (the JSON accepted by the command-line tool).
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
int32_t capflow_body_from_json(const char *json, struct CapflowBody **out);

// Convex hull of `n_points` points of dimension `dim`, stored row by row.
//
// # Safety
// `coords` must hold `dim * n_points` doubles and `out` be a valid pointer.
int32_t capflow_body_from_points(uintptr_t dim,
                                 const double *coords,
                                 uintptr_t n_points,
                                 struct CapflowBody **out);

// Ambient dimension of a body, 0 for null.
//
// # Safety
// `body` must be null or a live handle.
uintptr_t capflow_body_dim(const struct CapflowBody *body);

// # Safety
// `body` must be null or a handle not yet freed.
void capflow_body_free(struct CapflowBody *body);

// Normalized cap measure at depth `t` below the support plane through `r0`
// with outward normal `e`; both vectors have the body's dimension.
//
// # Safety
// Pointers must be valid; `r0` and `e` hold `capflow_body_dim(body)` doubles.
int32_t capflow_nu_t(const struct CapflowBody *body,
                     const double *r0,
                     const double *e,
                     double t,
                     struct CapflowMeasure **out);

// Limit measure of the tangent cone at a conical point `r0`. A null `e`
// picks the normalized sum of the normal-cone generators.
//
// # Safety
// Pointers other than `e` must be valid; vectors hold the body's dimension.
int32_t capflow_nu_star(const struct CapflowBody *body,
                        const double *r0,
                        const double *e,
                        struct CapflowMeasure **out);

// Planar two-atom limit `λ1 δ_e1 + λ2 δ_e2` with `λ1 e1 + λ2 e2 = e`.
//
// # Safety
// Each vector holds two doubles; `out` is valid.
int32_t capflow_limit_2d(const double *e1,
                         const double *e2,
                         const double *e,
                         struct CapflowMeasure **out);

// # Safety
// `m` must be null or a live handle.
uintptr_t capflow_measure_dim(const struct CapflowMeasure *m);

// Number of atoms, 0 for null.
//
// # Safety
// `m` must be null or a live handle.
uintptr_t capflow_measure_len(const struct CapflowMeasure *m);

// # Safety
// `m` must be null or a live handle.
double capflow_measure_total_mass(const struct CapflowMeasure *m);

// Copies atom `i`: its direction into `dir` (dimension doubles) and its
// weight into `weight`.
//
// # Safety
// `dir` must have room for `capflow_measure_dim(m)` doubles.
int32_t capflow_measure_atom(const struct CapflowMeasure *m,
                             uintptr_t i,
                             double *dir,
                             double *weight);

// Writes `∫ n dμ(n)` into `out` (dimension doubles).
//
// # Safety
// `out` must have room for `capflow_measure_dim(m)` doubles.
int32_t capflow_measure_resultant(const struct CapflowMeasure *m, double *out);

// # Safety
// `m` must be null or a handle not yet freed.
void capflow_measure_free(struct CapflowMeasure *m);

// Bounded-Lipschitz distance between two measures of equal dimension.
//
// # Safety
// Handles must be live and `out` valid.
int32_t capflow_bl_distance(const struct CapflowMeasure *a,
                            const struct CapflowMeasure *b,
                            double *out);

// Resistance of a convex function given as a function document. `panels`
// of 0 selects the exact evaluation, otherwise Gauss quadrature.
//
// # Safety
// `json` must be a nul-terminated string and `out` valid.
int32_t capflow_newton_resistance(const char *json, uintptr_t panels, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAPFLOW_H */
