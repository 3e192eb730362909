#ifndef TRE_H
#define TRE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every call.
typedef enum TreStatus {
  TRE_STATUS_OK = 0,
  TRE_STATUS_NULL_POINTER = 1,
  TRE_STATUS_INVALID_ARGUMENT = 2,
  TRE_STATUS_INVALID_STATE = 3,
  TRE_STATUS_DIMENSION_MISMATCH = 4,
  TRE_STATUS_NUMERICAL = 5,
  TRE_STATUS_PARSE = 6,
  TRE_STATUS_PANIC = 7,
} TreStatus;

// A seeded random stream for the sampling functions.
typedef struct TreSampler TreSampler;

// A density matrix.
typedef struct TreState TreState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *tre_last_error_message(void);

// Library version as a static nul-terminated string.
const char *tre_version(void);

// Builds a state from a row-major `dim × dim` matrix. `im` may be null for
// a real matrix.
//
// # Safety
// `re` (and `im` when non-null) must point to `dim*dim` doubles; `out` must
// be writable.
enum TreStatus tre_state_from_matrix(uintptr_t dim,
                                     const double *re,
                                     const double *im,
                                     struct TreState **out);

// Builds the diagonal state `diag(p_0, …, p_{dim-1})`.
//
// # Safety
// `diag` must point to `dim` doubles; `out` must be writable.
enum TreStatus tre_state_from_diagonal(uintptr_t dim, const double *diag, struct TreState **out);

// Qubit state `(I + xX + yY + zZ)/2`.
//
// # Safety
// `out` must be writable.
enum TreStatus tre_state_from_bloch(double x, double y, double z, struct TreState **out);

// Parses a state document (`matrix`, `diag`, `pure` or `bloch` form).
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum TreStatus tre_state_from_json(const char *json, struct TreState **out);

// Serializes a state in the `matrix` form. Release the string with
// [`tre_string_free`].
//
// # Safety
// `state` must be a live handle; `out` must be writable.
enum TreStatus tre_state_to_json(const struct TreState *state, char **out);

// Dimension of a state, or 0 for null.
//
// # Safety
// `state` must be null or a live handle.
uintptr_t tre_state_dim(const struct TreState *state);

// Copies the matrix row-major into `re` and `im`, each of length `len`
// (at least `dim*dim`). `im` may be null.
//
// # Safety
// `state` must be a live handle; `re` (and `im` when non-null) must be
// writable for `len` doubles.
enum TreStatus tre_state_matrix(const struct TreState *state,
                                double *re,
                                double *im,
                                uintptr_t len);

// # Safety
// `state` must be null or a handle not yet freed.
void tre_state_free(struct TreState *state);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void tre_string_free(char *s);

// New sampler; the same seed reproduces the same states.
struct TreSampler *tre_sampler_new(uint64_t seed);

// # Safety
// `sampler` must be null or a handle not yet freed.
void tre_sampler_free(struct TreSampler *sampler);

// Hilbert–Schmidt random state of the given rank.
//
// # Safety
// `sampler` must be a live handle; `out` must be writable.
enum TreStatus tre_state_random_mixed(struct TreSampler *sampler,
                                      uintptr_t dim,
                                      uintptr_t rank,
                                      struct TreState **out);

// Haar random pure state.
//
// # Safety
// `sampler` must be a live handle; `out` must be writable.
enum TreStatus tre_state_random_pure(struct TreSampler *sampler,
                                     uintptr_t dim,
                                     struct TreState **out);

// `S_a(ρ||σ)` for `a ∈ [0,1]`.
//
// # Safety
// `rho`, `sigma` must be live handles; `out` must be writable.
enum TreStatus tre_telescopic_relative_entropy(const struct TreState *rho,
                                               const struct TreState *sigma,
                                               double a,
                                               double *out);

// `S_0(ρ||σ) = 1 − tr ρ{σ}`.
//
// # Safety
// As [`tre_telescopic_relative_entropy`].
enum TreStatus tre_limit_zero(const struct TreState *rho,
                              const struct TreState *sigma,
                              double *out);

// `S_1(ρ||σ) = 1 − tr σ{ρ}`.
//
// # Safety
// As [`tre_telescopic_relative_entropy`].
enum TreStatus tre_limit_one(const struct TreState *rho, const struct TreState *sigma, double *out);

// `T(ρ,σ) = ½‖ρ − σ‖₁`.
//
// # Safety
// As [`tre_telescopic_relative_entropy`].
enum TreStatus tre_trace_distance(const struct TreState *rho,
                                  const struct TreState *sigma,
                                  double *out);

// `S(ρ||σ)` in nats; `+INFINITY` when the support of `ρ` is not inside that
// of `σ`.
//
// # Safety
// As [`tre_telescopic_relative_entropy`].
enum TreStatus tre_relative_entropy(const struct TreState *rho,
                                    const struct TreState *sigma,
                                    double *out);

// `Q_{p,a}(ρ,σ)` for `p ∈ (0,1)`, `a ∈ [0,1)`.
//
// # Safety
// As [`tre_telescopic_relative_entropy`].
enum TreStatus tre_trre(const struct TreState *rho,
                        const struct TreState *sigma,
                        double p,
                        double a,
                        double *out);

// `tr ρ^{1−p} σ^p`.
//
// # Safety
// As [`tre_telescopic_relative_entropy`].
enum TreStatus tre_renyi_overlap(const struct TreState *rho,
                                 const struct TreState *sigma,
                                 double p,
                                 double *out);

// Closed form of `S_a` for two pure states at trace distance `t`.
//
// # Safety
// `out` must be writable.
enum TreStatus tre_pure_closed_form(double t, double a, double *out);

// Runs the randomized checks over `dims` with the default grids and slack,
// writes the JSON report to `report_json` (release with
// [`tre_string_free`]) and the overall verdict to `passed`.
//
// # Safety
// `dims` must point to `n_dims` values; `report_json` and `passed` must be
// writable.
enum TreStatus tre_verify(const uintptr_t *dims,
                          uintptr_t n_dims,
                          uint64_t trials,
                          uint64_t seed,
                          char **report_json,
                          bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRE_H */
