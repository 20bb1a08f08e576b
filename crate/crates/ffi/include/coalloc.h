#ifndef COALLOC_H
#define COALLOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CoallocStatus {
  COALLOC_STATUS_OK = 0,
  COALLOC_STATUS_NULL_POINTER = 1,
  COALLOC_STATUS_INVALID_ARGUMENT = 2,
  COALLOC_STATUS_BUFFER_TOO_SMALL = 3,
  COALLOC_STATUS_DECOMPOSITION_FAILED = 4,
  COALLOC_STATUS_PANIC = 5,
} CoallocStatus;

/**
 * An `n × 2^n` allocation matrix.
 */
typedef struct CoallocAllocation CoallocAllocation;

/**
 * Weighted permutations whose special allocations sum to a matrix.
 */
typedef struct CoallocDecomposition CoallocDecomposition;

/**
 * A game: `2^n` coalition values in bitmask order.
 */
typedef struct CoallocGame CoallocGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread; empty after a
 * success. Valid until the next call into the library on this thread.
 */
const char *coalloc_last_error(void);

/**
 * Creates a game from `len = 2^n` values in bitmask order.
 */
enum CoallocStatus coalloc_game_new(size_t n,
                                    const double *values,
                                    size_t len,
                                    struct CoallocGame **out);

void coalloc_game_free(struct CoallocGame *game);

enum CoallocStatus coalloc_game_is_monotone(const struct CoallocGame *game, bool *out);

enum CoallocStatus coalloc_game_is_superadditive(const struct CoallocGame *game, bool *out);

/**
 * Writes the `n` Shapley payoffs into `out`.
 */
enum CoallocStatus coalloc_shapley_value(const struct CoallocGame *game, double *out, size_t len);

/**
 * Creates an allocation from `len = n·2^n` entries, row-major.
 */
enum CoallocStatus coalloc_allocation_new(size_t n,
                                          const double *entries,
                                          size_t len,
                                          struct CoallocAllocation **out);

/**
 * Special allocation of a permutation of `1..=len`.
 */
enum CoallocStatus coalloc_allocation_special(const size_t *perm,
                                              size_t len,
                                              struct CoallocAllocation **out);

enum CoallocStatus coalloc_allocation_shapley(size_t n, struct CoallocAllocation **out);

/**
 * A seeded random point of the polytope together with its certificate.
 */
enum CoallocStatus coalloc_allocation_random(size_t n,
                                             size_t support,
                                             uint64_t seed,
                                             struct CoallocAllocation **out,
                                             struct CoallocDecomposition **cert);

void coalloc_allocation_free(struct CoallocAllocation *allocation);

enum CoallocStatus coalloc_allocation_players(const struct CoallocAllocation *allocation,
                                              size_t *out);

/**
 * Copies the `n·2^n` entries, row-major, into `out`.
 */
enum CoallocStatus coalloc_allocation_entries(const struct CoallocAllocation *allocation,
                                              double *out,
                                              size_t len);

/**
 * Writes the `n` payoffs of `allocation` on `game` into `out`.
 */
enum CoallocStatus coalloc_apply(const struct CoallocAllocation *allocation,
                                 const struct CoallocGame *game,
                                 double *out,
                                 size_t len);

/**
 * Number of column sums off `(−1, 0, …, 0, 1)`; zero means efficient.
 */
enum CoallocStatus coalloc_check_efficiency(const struct CoallocAllocation *allocation,
                                            double tol,
                                            size_t *violations);

/**
 * Number of failed sign, pairing and partial-row-sum conditions.
 */
enum CoallocStatus coalloc_check_reasonable_structural(const struct CoallocAllocation *allocation,
                                                       double tol,
                                                       size_t *violations);

/**
 * Number of rows and interior columns whose absolute sum is not 2.
 */
enum CoallocStatus coalloc_check_abs_sums(const struct CoallocAllocation *allocation,
                                          double tol,
                                          size_t *violations);

/**
 * Number of rows that do not sum to zero.
 */
enum CoallocStatus coalloc_check_row_sums_zero(const struct CoallocAllocation *allocation,
                                               double tol,
                                               size_t *violations);

/**
 * Chain peeling. Fails with `DECOMPOSITION_FAILED` when the matrix is not
 * reasonable and efficient at `tol`.
 */
enum CoallocStatus coalloc_peel_decompose(const struct CoallocAllocation *allocation,
                                          double tol,
                                          struct CoallocDecomposition **out);

void coalloc_decomposition_free(struct CoallocDecomposition *decomposition);

enum CoallocStatus coalloc_decomposition_len(const struct CoallocDecomposition *decomposition,
                                             size_t *out);

/**
 * Term `index`: its 1-based permutation (`perm_len >= n`) and weight.
 */
enum CoallocStatus coalloc_decomposition_term(const struct CoallocDecomposition *decomposition,
                                              size_t index,
                                              size_t *perm,
                                              size_t perm_len,
                                              double *weight);

/**
 * Number of failed certificate conditions; zero means `decomposition`
 * reconstructs `allocation` within `tol`.
 */
enum CoallocStatus coalloc_verify_decomposition(const struct CoallocAllocation *allocation,
                                                const struct CoallocDecomposition *decomposition,
                                                double tol,
                                                size_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COALLOC_H */
