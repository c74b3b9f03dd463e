#ifndef R2SORT_H
#define R2SORT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum R2sStatus {
  R2S_STATUS_OK = 0,
  R2S_STATUS_INVALID_ARGUMENT = 1,
  R2S_STATUS_DEGENERATE_COLUMN = 2,
  R2S_STATUS_UNDEFINED_SORTABILITY = 3,
  R2S_STATUS_PATH_COUNT_OVERFLOW = 4,
  R2S_STATUS_DIMENSION_MISMATCH = 5,
  R2S_STATUS_PARSE_ERROR = 6,
  R2S_STATUS_IO_ERROR = 7,
  R2S_STATUS_JSON_ERROR = 8,
  R2S_STATUS_NULL_POINTER = 9,
  R2S_STATUS_BUFFER_TOO_SMALL = 10,
  R2S_STATUS_PANIC = 11,
} R2sStatus;

/**
 * How cause-effect pairs are counted in the sortability.
 */
typedef enum R2sWeighting {
  R2S_WEIGHTING_UNIQUE_LENGTH = 0,
  R2S_WEIGHTING_PATH_EXISTENCE = 1,
  R2S_WEIGHTING_PATH_COUNT = 2,
} R2sWeighting;

/**
 * Directed acyclic graph.
 */
typedef struct R2sDag R2sDag;

/**
 * Numeric data matrix, one column per variable.
 */
typedef struct R2sDataset R2sDataset;

/**
 * Weighted DAG estimate with its candidate causal order.
 */
typedef struct R2sEstimate R2sEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *r2s_last_error_message(void);

/**
 * DAG on `d` nodes from `n_edges` `(source, target)` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * n_edges` values; `out` must be writable.
 */
enum R2sStatus r2s_dag_new(size_t d, const size_t *edges, size_t n_edges, struct R2sDag **out);

/**
 * Erdős–Rényi DAG with exactly `m` edges.
 *
 * # Safety
 * `out` must be writable.
 */
enum R2sStatus r2s_dag_sample_er(size_t d, size_t m, uint64_t seed, struct R2sDag **out);

/**
 * Scale-free DAG where each node attaches to up to `attach` earlier nodes.
 *
 * # Safety
 * `out` must be writable.
 */
enum R2sStatus r2s_dag_sample_sf(size_t d, size_t attach, uint64_t seed, struct R2sDag **out);

/**
 * # Safety
 * `dag` must come from this library and not be used afterwards. NULL is ignored.
 */
void r2s_dag_free(struct R2sDag *dag);

/**
 * # Safety
 * `dag` must be a live handle; `nodes` and `edges` must be writable.
 */
enum R2sStatus r2s_dag_counts(const struct R2sDag *dag, size_t *nodes, size_t *edges);

/**
 * Writes the edges as flat `(source, target)` pairs in lexicographic order.
 * `capacity` counts `usize` slots, so at least `2 * edge_count` are needed.
 *
 * # Safety
 * `dag` must be a live handle; `buf` must hold `capacity` values.
 */
enum R2sStatus r2s_dag_edges(const struct R2sDag *dag, size_t *buf, size_t capacity);

/**
 * Dataset from `n * d` row-major values.
 *
 * # Safety
 * `values` must point to `n * d` doubles; `out` must be writable.
 */
enum R2sStatus r2s_dataset_new(size_t n, size_t d, const double *values, struct R2sDataset **out);

/**
 * Reads a CSV file with a header row.
 *
 * # Safety
 * `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum R2sStatus r2s_dataset_read_csv(const char *path, struct R2sDataset **out);

/**
 * `n` Gaussian observations from a linear ANM on `dag` with weights drawn
 * from `Unif(±(w_lo, w_hi))` and noise scales from `Unif(sigma_lo, sigma_hi)`.
 *
 * # Safety
 * `dag` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_dataset_simulate(const struct R2sDag *dag,
                                    double w_lo,
                                    double w_hi,
                                    double sigma_lo,
                                    double sigma_hi,
                                    size_t n,
                                    uint64_t seed,
                                    struct R2sDataset **out);

/**
 * New dataset with every column at mean 0 and variance 1.
 *
 * # Safety
 * `data` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_dataset_standardize(const struct R2sDataset *data, struct R2sDataset **out);

/**
 * # Safety
 * `data` must be a live handle; `n` and `d` must be writable.
 */
enum R2sStatus r2s_dataset_shape(const struct R2sDataset *data, size_t *n, size_t *d);

/**
 * # Safety
 * `data` must come from this library and not be used afterwards. NULL is ignored.
 */
void r2s_dataset_free(struct R2sDataset *data);

/**
 * R² of every column regressed on all others, written to `out[0..d]`.
 *
 * # Safety
 * `data` must be a live handle; `out` must hold `capacity` doubles.
 */
enum R2sStatus r2s_r2_criterion(const struct R2sDataset *data, double *out, size_t capacity);

/**
 * Empirical variance of every column, written to `out[0..d]`.
 *
 * # Safety
 * `data` must be a live handle; `out` must hold `capacity` doubles.
 */
enum R2sStatus r2s_var_criterion(const struct R2sDataset *data, double *out, size_t capacity);

/**
 * Sortability of the per-node scores `tau` with respect to `dag`.
 * `weighting` is an [`R2sWeighting`] value; score differences within
 * `tie_tolerance` count as ties.
 *
 * # Safety
 * `tau` must point to `len` doubles; `dag` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_sortability(const double *tau,
                               size_t len,
                               const struct R2sDag *dag,
                               uint32_t weighting,
                               double tie_tolerance,
                               double *out);

/**
 * # Safety
 * `data` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_r2_sort_n_regress(const struct R2sDataset *data, struct R2sEstimate **out);

/**
 * # Safety
 * `data` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_var_sort_n_regress(const struct R2sDataset *data, struct R2sEstimate **out);

/**
 * # Safety
 * `data` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_random_regress(const struct R2sDataset *data,
                                  uint64_t seed,
                                  struct R2sEstimate **out);

/**
 * Row-major `d × d` weights; entry `(s, t)` estimates the effect of `s` on `t`.
 *
 * # Safety
 * `est` must be a live handle; `out` must hold `capacity` doubles.
 */
enum R2sStatus r2s_estimate_weights(const struct R2sEstimate *est, double *out, size_t capacity);

/**
 * Candidate causal order, earliest node first.
 *
 * # Safety
 * `est` must be a live handle; `out` must hold `capacity` values.
 */
enum R2sStatus r2s_estimate_order(const struct R2sEstimate *est, size_t *out, size_t capacity);

/**
 * DAG of the edges with `|w| > eps`.
 *
 * # Safety
 * `est` must be a live handle; `out` must be writable.
 */
enum R2sStatus r2s_estimate_to_dag(const struct R2sEstimate *est, double eps, struct R2sDag **out);

/**
 * # Safety
 * `est` must come from this library and not be used afterwards. NULL is ignored.
 */
void r2s_estimate_free(struct R2sEstimate *est);

/**
 * Structural intervention distance of `estimate` from `truth`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum R2sStatus r2s_sid(const struct R2sDag *truth, const struct R2sDag *estimate, size_t *out);

/**
 * Structural Hamming distance; a reversed edge counts once.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum R2sStatus r2s_shd(const struct R2sDag *truth, const struct R2sDag *estimate, size_t *out);

/**
 * `E[ln|V|]` for `V ~ Unif(±(lo, hi))`.
 *
 * # Safety
 * `out` must be writable.
 */
enum R2sStatus r2s_expected_log_abs_weight(double lo, double hi, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* R2SORT_H */
