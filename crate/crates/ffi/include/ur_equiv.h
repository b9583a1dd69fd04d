#ifndef UR_EQUIV_H
#define UR_EQUIV_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum UrStatus {
  UR_STATUS_OK = 0,
  UR_STATUS_NULL_POINTER = 1,
  UR_STATUS_INVALID_ARGUMENT = 2,
  UR_STATUS_DIMENSION_MISMATCH = 3,
  UR_STATUS_NOT_HERMITIAN = 4,
  UR_STATUS_INVALID_STATE = 5,
  UR_STATUS_NO_CONVERGENCE = 6,
  UR_STATUS_DOMAIN_ERROR = 7,
  // Second moments do not determine the distribution.
  UR_STATUS_AMBIGUOUS = 8,
  UR_STATUS_UNKNOWN_RELATION = 9,
  UR_STATUS_BUFFER_TOO_SMALL = 10,
  // The library panicked; this is a bug.
  UR_STATUS_INTERNAL = 99,
} UrStatus;

// Opaque density matrix.
typedef struct UrDensityMatrix UrDensityMatrix;

// Opaque observable.
typedef struct UrObservable UrObservable;

// Outcome of [`ur_relation_evaluate`].
typedef struct UrRelationReport {
  double lhs;
  double rhs;
  // `rhs − lhs` for inequalities, `−|residual|` for equalities.
  double slack;
  double residual;
  bool satisfied;
  bool is_equality;
} UrRelationReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ur_version(void);

// Message of the last failed call on this thread; valid until the next
// failing call on the same thread. Empty if nothing failed yet.
const char *ur_last_error_message(void);

// Density matrix from its entries. `im` may be null for a real matrix.
//
// # Safety
// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out`
// must be writable.
enum UrStatus ur_density_matrix_new(size_t dim,
                                    const double *re,
                                    const double *im,
                                    struct UrDensityMatrix **out);

// Haar-random pure state, `|ψ⟩⟨ψ|`.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_density_matrix_random_pure(size_t dim,
                                            uint64_t seed,
                                            struct UrDensityMatrix **out);

// Hilbert–Schmidt random mixed state.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_density_matrix_random_mixed(size_t dim,
                                             uint64_t seed,
                                             struct UrDensityMatrix **out);

// # Safety
// `rho` must be null or a handle from this library not yet freed.
void ur_density_matrix_free(struct UrDensityMatrix *rho);

// Dimension of `rho`, 0 for a null handle.
//
// # Safety
// `rho` must be null or a live handle.
size_t ur_density_matrix_dim(const struct UrDensityMatrix *rho);

// `Tr[ρ²]`
//
// # Safety
// `rho` must be a live handle and `out` writable.
enum UrStatus ur_density_matrix_purity(const struct UrDensityMatrix *rho, double *out);

// Observable from a Hermitian matrix. `im` may be null for a real matrix.
//
// # Safety
// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out`
// must be writable.
enum UrStatus ur_observable_new(size_t dim,
                                const double *re,
                                const double *im,
                                struct UrObservable **out);

// `J·n` for spin `two_j / 2`; `n` must be a unit vector.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_observable_spin(uint32_t two_j,
                                 double nx,
                                 double ny,
                                 double nz,
                                 struct UrObservable **out);

// `σ·n` for a unit vector `n`.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_observable_qubit(double nx, double ny, double nz, struct UrObservable **out);

// # Safety
// `obs` must be null or a handle from this library not yet freed.
void ur_observable_free(struct UrObservable *obs);

// Dimension of `obs`, 0 for a null handle.
//
// # Safety
// `obs` must be null or a live handle.
size_t ur_observable_dim(const struct UrObservable *obs);

// Eigenvalues in descending order.
//
// # Safety
// `obs` must be a live handle and `out` must hold `len` doubles.
enum UrStatus ur_observable_eigenvalues(const struct UrObservable *obs, double *out, size_t len);

// Born probabilities of `obs` in `rho`, ordered like the eigenvalues.
//
// # Safety
// Handles must be live and `out` must hold `len` doubles.
enum UrStatus ur_born_probabilities(const struct UrDensityMatrix *rho,
                                    const struct UrObservable *obs,
                                    double *out,
                                    size_t len);

// `Tr[ρA²] − Tr[ρA]²`
//
// # Safety
// Handles must be live and `out` writable.
enum UrStatus ur_variance(const struct UrDensityMatrix *rho,
                          const struct UrObservable *obs,
                          double *out);

// Rényi entropy (nats) of a probability vector; `alpha = 1` is Shannon.
//
// # Safety
// `probs` must point to `len` doubles and `out` be writable.
enum UrStatus ur_renyi_entropy(const double *probs, size_t len, double alpha, double *out);

// Rényi entropy of a qubit observable with normalized variance `v ∈ [0, 1]`.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_qubit_entropy_from_variance(double v, double alpha, double *out);

// Inverse of [`ur_qubit_entropy_from_variance`] for `h ∈ [0, ln 2]`.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_qubit_variance_from_entropy(double h, double alpha, double *out);

// Born probabilities recovered from variances of a commuting family built
// on `obs`.
//
// # Safety
// Handles must be live and `out` must hold `len` doubles.
enum UrStatus ur_reconstruct_from_variances(const struct UrDensityMatrix *rho,
                                            const struct UrObservable *obs,
                                            double *out,
                                            size_t len);

// Born probabilities recovered from covariances of the spectral projectors.
//
// # Safety
// Handles must be live and `out` must hold `len` doubles.
enum UrStatus ur_reconstruct_from_covariances(const struct UrDensityMatrix *rho,
                                              const struct UrObservable *obs,
                                              double *out,
                                              size_t len);

// Evaluates the relation named `id` (e.g. `"robertson"`).
//
// `observables` holds `n_observables` handles; `alphas` holds `n_alphas`
// Rényi indices and may be null when `n_alphas` is 0.
//
// # Safety
// `id` must be a NUL-terminated string, all handles live, and `out`
// writable.
enum UrStatus ur_relation_evaluate(const char *id,
                                   const struct UrDensityMatrix *rho,
                                   const struct UrObservable *const *observables,
                                   size_t n_observables,
                                   const double *alphas,
                                   size_t n_alphas,
                                   struct UrRelationReport *out);

// Minimum of `V(J_x) + V(J_z)` over pure states of dimension `dim`
// (spin `(dim − 1)/2`), multi-start from `seed`.
//
// # Safety
// `out` must be writable.
enum UrStatus ur_minimize_spin_variance_sum(size_t dim,
                                            size_t restarts,
                                            uint64_t seed,
                                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UR_EQUIV_H */
