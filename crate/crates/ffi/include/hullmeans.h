#ifndef HULLMEANS_H
#define HULLMEANS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HmStatus {
  HM_STATUS_OK = 0,
  HM_STATUS_NULL_POINTER = 1,
  HM_STATUS_INVALID_ARGUMENT = 2,
  HM_STATUS_DEGENERATE_INPUT = 3,
  HM_STATUS_DIMENSION_ERROR = 4,
  HM_STATUS_INVALID_K = 5,
  HM_STATUS_INVALID_M = 6,
  HM_STATUS_EXHAUSTED_CANDIDATES = 7,
  HM_STATUS_SHAPE_ERROR = 8,
  HM_STATUS_ZERO_REFERENCE_COORDINATE = 9,
  HM_STATUS_NON_FINITE = 10,
  HM_STATUS_IO_ERROR = 11,
  HM_STATUS_PARSE_ERROR = 12,
  HM_STATUS_MISSING_DATA = 13,
  HM_STATUS_PANIC = 14,
} HmStatus;

// Label column of a delimited file.
typedef enum HmLabelColumn {
  HM_LABEL_COLUMN_NONE = 0,
  HM_LABEL_COLUMN_FIRST = 1,
  HM_LABEL_COLUMN_LAST = 2,
} HmLabelColumn;

// K centers of equal dimension.
typedef struct HmCentroids HmCentroids;

// Samples with optional integer labels.
typedef struct HmDataset HmDataset;

// A converged (or iteration-capped) Lloyd run.
typedef struct HmModel HmModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Owned by the library.
const char *hm_last_error_message(void);

// Static name of a status code.
const char *hm_status_name(enum HmStatus status);

// Copies `n_samples * dim` row-major values. `labels` may be null.
//
// # Safety
// `values` must point to `n_samples * dim` doubles and `labels`, when not
// null, to `n_samples` integers. `out` must be writable.
enum HmStatus hm_dataset_new(const double *values,
                             size_t n_samples,
                             size_t dim,
                             const size_t *labels,
                             struct HmDataset **out);

// Loads a built-in dataset by name from the configured data directory.
//
// # Safety
// `name` must be a nul-terminated string and `out` writable.
enum HmStatus hm_dataset_load_builtin(const char *name, struct HmDataset **out);

// Loads a comma-separated file.
//
// # Safety
// `path` must be a nul-terminated string and `out` writable.
enum HmStatus hm_dataset_load_csv(const char *path,
                                  enum HmLabelColumn label,
                                  struct HmDataset **out);

// Zero for a null handle.
//
// # Safety
// The handle must be null or valid.
size_t hm_dataset_n_samples(const struct HmDataset *data);

// Zero for a null handle.
//
// # Safety
// The handle must be null or valid.
size_t hm_dataset_dim(const struct HmDataset *data);

// Copies the labels into `out` (length `n_samples`).
//
// # Safety
// `out` must have room for `len` integers.
enum HmStatus hm_dataset_labels(const struct HmDataset *data, size_t *out, size_t len);

// # Safety
// `data` must come from this library and not be used afterwards.
void hm_dataset_free(struct HmDataset *data);

// Hull-seeded initialization. A negative `m` selects the default discard
// count. When `seed_indices` is not null it receives the `k` chosen rows.
//
// # Safety
// `seed_indices`, when not null, must have room for `k` integers; `out`
// must be writable.
enum HmStatus hm_proposed_init(const struct HmDataset *data,
                               size_t k,
                               int64_t m,
                               size_t *seed_indices,
                               struct HmCentroids **out);

// `k` distinct samples drawn uniformly with the given seed.
//
// # Safety
// Same contract as [`hm_proposed_init`].
enum HmStatus hm_random_init(const struct HmDataset *data,
                             size_t k,
                             uint64_t seed,
                             size_t *seed_indices,
                             struct HmCentroids **out);

// Copies `k * dim` row-major centroids from caller memory.
//
// # Safety
// `values` must point to `k * dim` doubles; `out` must be writable.
enum HmStatus hm_centroids_new(const double *values,
                               size_t k,
                               size_t dim,
                               struct HmCentroids **out);

// # Safety
// The handle must be null or valid.
size_t hm_centroids_k(const struct HmCentroids *c);

// # Safety
// The handle must be null or valid.
size_t hm_centroids_dim(const struct HmCentroids *c);

// Copies `k * dim` row-major values into `out`.
//
// # Safety
// `out` must have room for `len` doubles.
enum HmStatus hm_centroids_values(const struct HmCentroids *c, double *out, size_t len);

// # Safety
// `c` must come from this library and not be used afterwards.
void hm_centroids_free(struct HmCentroids *c);

// Lloyd iterations from `init`. `max_iter` of zero uses the default cap.
//
// # Safety
// Handles must be valid; `out` must be writable.
enum HmStatus hm_lloyd(const struct HmDataset *data,
                       const struct HmCentroids *init,
                       size_t max_iter,
                       double tol,
                       struct HmModel **out);

// # Safety
// The handle must be null or valid.
size_t hm_model_iterations(const struct HmModel *model);

// NaN for a null handle.
//
// # Safety
// The handle must be null or valid.
double hm_model_cost(const struct HmModel *model);

// # Safety
// The handle must be null or valid.
bool hm_model_converged(const struct HmModel *model);

// # Safety
// The handle must be null or valid.
uint64_t hm_model_distance_evals(const struct HmModel *model);

// Copies the cluster index of every sample into `out`.
//
// # Safety
// `out` must have room for `len` integers.
enum HmStatus hm_model_assignment(const struct HmModel *model, size_t *out, size_t len);

// Final centroids as a new handle.
//
// # Safety
// `out` must be writable.
enum HmStatus hm_model_centroids(const struct HmModel *model, struct HmCentroids **out);

// # Safety
// `model` must come from this library and not be used afterwards.
void hm_model_free(struct HmModel *model);

// Pair-agreement score of two labelings of `n` samples.
//
// # Safety
// `pred` and `truth` must point to `n` integers; `out` must be writable.
enum HmStatus hm_rand_index(const size_t *pred, const size_t *truth, size_t n, double *out);

// Percentage of samples outside their best-matched class.
//
// # Safety
// `pred` and `truth` must point to `n` integers; `out` must be writable.
enum HmStatus hm_error_percent(const size_t *pred, const size_t *truth, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HULLMEANS_H */
