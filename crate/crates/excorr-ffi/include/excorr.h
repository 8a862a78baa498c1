/* C interface for the excorr extended-correlation library. */

#ifndef EXCORR_H
#define EXCORR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum ExcorrStatus {
  EXCORR_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  EXCORR_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  EXCORR_STATUS_INVALID_UTF8 = 2,
  /**
   * An argument violated a precondition (bad pattern, unknown column, ...).
   */
  EXCORR_STATUS_INVALID_ARGUMENT = 3,
  /**
   * File could not be read or written.
   */
  EXCORR_STATUS_IO = 4,
  /**
   * Input text could not be parsed as a dataset.
   */
  EXCORR_STATUS_PARSE = 5,
  /**
   * Zero-variance data where variation is required.
   */
  EXCORR_STATUS_DEGENERATE = 6,
  /**
   * An iterative solver failed to converge.
   */
  EXCORR_STATUS_NO_CONVERGENCE = 7,
  /**
   * An index or size argument was out of range.
   */
  EXCORR_STATUS_OUT_OF_RANGE = 8,
  /**
   * A caller-supplied buffer was too small.
   */
  EXCORR_STATUS_BUFFER_TOO_SMALL = 9,
} ExcorrStatus;

/**
 * Aggregation mode for the extended coefficient.
 */
typedef enum ExcorrMode {
  EXCORR_MODE_INSTANT = 0,
  EXCORR_MODE_ROLLING_MEAN = 1,
} ExcorrMode;

/**
 * Opaque correlation-matrix handle.
 */
typedef struct ExcorrCorrMatrix ExcorrCorrMatrix;

/**
 * Opaque dataset handle.
 */
typedef struct ExcorrData ExcorrData;

/**
 * Opaque subset-ranking handle.
 */
typedef struct ExcorrRanking ExcorrRanking;

/**
 * Opaque maximal-eigenvalue trace handle.
 */
typedef struct ExcorrTrace ExcorrTrace;

/**
 * Extended correlation coefficient in both normalizations.
 */
typedef struct ExcorrRhoResult {
  double rho_eig;
  double rho_frob;
  size_t n_vars;
  /**
   * Non-degenerate prefixes behind the mean; 0 in instant mode.
   */
  size_t trace_length;
} ExcorrRhoResult;

/**
 * Noise decomposition around a target column.
 */
typedef struct ExcorrNoiseReport {
  double total_noise;
  double predictor_noise;
  double labeling_noise;
} ExcorrNoiseReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the most recent error message of this thread into `buf` (always
 * NUL-terminated, truncated to `cap` bytes) and returns the full length of
 * the message including the NUL. With a NULL or empty buffer nothing is
 * copied, so a `excorr_last_error_message(NULL, 0)` call sizes the buffer.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be NULL.
 */
size_t excorr_last_error_message(char *buf, size_t cap);

/**
 * Reads a CSV dataset from `path` into a new handle.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum ExcorrStatus excorr_data_read_csv(const char *path, struct ExcorrData **out);

/**
 * Writes the dataset to `path` as CSV.
 *
 * # Safety
 * `data` must be a live handle; `path` a NUL-terminated string.
 */
enum ExcorrStatus excorr_data_write_csv(const struct ExcorrData *data, const char *path);

/**
 * Generates a fully correlated dataset from a sign pattern like `"++-"`.
 *
 * # Safety
 * `pattern` must be a NUL-terminated string; `out` a valid pointer.
 */
enum ExcorrStatus excorr_data_gen_fc(const char *pattern,
                                     size_t rows,
                                     uint64_t seed,
                                     struct ExcorrData **out);

/**
 * Generates a fully uncorrelated dataset.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ExcorrStatus excorr_data_gen_fu(size_t n_vars,
                                     size_t rows,
                                     uint64_t seed,
                                     struct ExcorrData **out);

/**
 * Returns a new dataset with every cell perturbed by a seeded uniform draw
 * on `[-amplitude, amplitude]`; the input is untouched.
 *
 * # Safety
 * `data` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_data_add_noise(const struct ExcorrData *data,
                                        double amplitude,
                                        uint64_t seed,
                                        struct ExcorrData **out);

/**
 * Number of sample rows; 0 for a NULL handle.
 *
 * # Safety
 * `data` must be a live handle or NULL.
 */
size_t excorr_data_n_rows(const struct ExcorrData *data);

/**
 * Number of variable columns; 0 for a NULL handle.
 *
 * # Safety
 * `data` must be a live handle or NULL.
 */
size_t excorr_data_n_cols(const struct ExcorrData *data);

/**
 * Fetches one cell.
 *
 * # Safety
 * `data` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_data_cell(const struct ExcorrData *data,
                                   size_t row,
                                   size_t col,
                                   double *out);

/**
 * Length in bytes (excluding the NUL) of a column name; 0 when out of range.
 *
 * # Safety
 * `data` must be a live handle or NULL.
 */
size_t excorr_data_column_name_len(const struct ExcorrData *data, size_t col);

/**
 * Copies a column name into `buf` (NUL-terminated).
 *
 * # Safety
 * `data` must be a live handle; `buf` must point to `cap` writable bytes.
 */
enum ExcorrStatus excorr_data_column_name(const struct ExcorrData *data,
                                          size_t col,
                                          char *buf,
                                          size_t cap);

/**
 * Balanced median labels by the target column: 0 = lower class, 1 = upper.
 * `cap` must be at least the number of rows.
 *
 * # Safety
 * `data` must be a live handle; `target` a NUL-terminated string; `out`
 * must point to `cap` writable bytes.
 */
enum ExcorrStatus excorr_median_label(const struct ExcorrData *data,
                                      const char *target,
                                      uint8_t *out,
                                      size_t cap);

/**
 * Releases a dataset handle.
 *
 * # Safety
 * `data` must be NULL or a handle not freed before.
 */
void excorr_data_free(struct ExcorrData *data);

/**
 * Sample Pearson correlation of two `len`-long vectors.
 *
 * # Safety
 * `x` and `y` must point to `len` readable doubles; `out` must be valid.
 */
enum ExcorrStatus excorr_pearson(const double *x, const double *y, size_t len, double *out);

/**
 * Full correlation matrix of a dataset.
 *
 * # Safety
 * `data` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_corr_matrix(const struct ExcorrData *data, struct ExcorrCorrMatrix **out);

/**
 * The ±1 correlation matrix determined by a sign pattern like `"++-"`.
 *
 * # Safety
 * `pattern` must be a NUL-terminated string; `out` a valid pointer.
 */
enum ExcorrStatus excorr_fc_from_pattern(const char *pattern, struct ExcorrCorrMatrix **out);

/**
 * Matrix dimension; 0 for a NULL handle.
 *
 * # Safety
 * `matrix` must be a live handle or NULL.
 */
size_t excorr_corr_n(const struct ExcorrCorrMatrix *matrix);

/**
 * Fetches one matrix entry.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_corr_entry(const struct ExcorrCorrMatrix *matrix,
                                    size_t i,
                                    size_t j,
                                    double *out);

/**
 * Releases a correlation-matrix handle.
 *
 * # Safety
 * `matrix` must be NULL or a handle not freed before.
 */
void excorr_corr_free(struct ExcorrCorrMatrix *matrix);

/**
 * Dominant eigenvalue; lies in `[1, n]` for a valid correlation matrix.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_lambda_max(const struct ExcorrCorrMatrix *matrix, double *out);

/**
 * Operator 2-norm (equals the dominant eigenvalue for correlation
 * matrices).
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_spectral_norm(const struct ExcorrCorrMatrix *matrix, double *out);

/**
 * Entrywise (Frobenius) norm; lies in `[sqrt(n), n]` for a correlation
 * matrix.
 *
 * # Safety
 * `matrix` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_frobenius_norm(const struct ExcorrCorrMatrix *matrix, double *out);

/**
 * Full spectrum, sorted descending, written into `out_values` (which must
 * hold at least `n` doubles). `out_iterations` (optional) receives the
 * Jacobi sweep count.
 *
 * # Safety
 * `matrix` must be a live handle; `out_values` must point to `cap`
 * writable doubles; `out_iterations` must be valid or NULL.
 */
enum ExcorrStatus excorr_eig_sym(const struct ExcorrCorrMatrix *matrix,
                                 double *out_values,
                                 size_t cap,
                                 size_t *out_iterations);

/**
 * Extended correlation coefficient of a dataset. `min_prefix = 0` selects
 * the default (variables + 1).
 *
 * # Safety
 * `data` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_rho(const struct ExcorrData *data,
                             enum ExcorrMode mode,
                             size_t min_prefix,
                             bool fail_on_degenerate,
                             struct ExcorrRhoResult *out);

/**
 * Noise decomposition around `target`.
 *
 * # Safety
 * `data` must be a live handle; `target` a NUL-terminated string; `out` a
 * valid pointer.
 */
enum ExcorrStatus excorr_noise_report(const struct ExcorrData *data,
                                      const char *target,
                                      enum ExcorrMode mode,
                                      size_t min_prefix,
                                      bool fail_on_degenerate,
                                      struct ExcorrNoiseReport *out);

/**
 * Labeling-noise composition: `max(0, total - predictor)`.
 */
double excorr_labeling_noise(double total_noise, double predictor_noise);

/**
 * Maximal-eigenvalue trace over growing prefixes.
 *
 * # Safety
 * `data` must be a live handle; `out` a valid pointer.
 */
enum ExcorrStatus excorr_lambda_trace(const struct ExcorrData *data,
                                      size_t min_prefix,
                                      bool fail_on_degenerate,
                                      struct ExcorrTrace **out);

/**
 * Number of trace entries; 0 for a NULL handle.
 *
 * # Safety
 * `trace` must be a live handle or NULL.
 */
size_t excorr_trace_len(const struct ExcorrTrace *trace);

/**
 * Fetches one trace entry; `out_lambda` receives NaN for degenerate
 * prefixes. Out-pointers may be NULL to skip a field.
 *
 * # Safety
 * `trace` must be a live handle; out-pointers must be valid or NULL.
 */
enum ExcorrStatus excorr_trace_entry(const struct ExcorrTrace *trace,
                                     size_t index,
                                     size_t *out_prefix_len,
                                     double *out_lambda,
                                     bool *out_degenerate);

/**
 * Mean maximal eigenvalue over non-degenerate entries and their count.
 *
 * # Safety
 * `trace` must be a live handle; out-pointers must be valid or NULL.
 */
enum ExcorrStatus excorr_trace_mean(const struct ExcorrTrace *trace,
                                    double *out_mean,
                                    size_t *out_count);

/**
 * Releases a trace handle.
 *
 * # Safety
 * `trace` must be NULL or a handle not freed before.
 */
void excorr_trace_free(struct ExcorrTrace *trace);

/**
 * Ranks every `k`-subset of predictors by extended correlation with the
 * target (descending; ties lexicographic by column names).
 *
 * # Safety
 * `data` must be a live handle; `target` a NUL-terminated string; `out` a
 * valid pointer.
 */
enum ExcorrStatus excorr_rank_subsets(const struct ExcorrData *data,
                                      const char *target,
                                      size_t k,
                                      enum ExcorrMode mode,
                                      size_t min_prefix,
                                      bool fail_on_degenerate,
                                      struct ExcorrRanking **out);

/**
 * Number of ranked subsets; 0 for a NULL handle.
 *
 * # Safety
 * `ranking` must be a live handle or NULL.
 */
size_t excorr_ranking_len(const struct ExcorrRanking *ranking);

/**
 * Fetches the scores of one ranked subset; `out_predictor_noise` receives
 * NaN for singleton subsets. Out-pointers may be NULL to skip a field.
 *
 * # Safety
 * `ranking` must be a live handle; out-pointers must be valid or NULL.
 */
enum ExcorrStatus excorr_ranking_entry(const struct ExcorrRanking *ranking,
                                       size_t index,
                                       double *out_rho,
                                       double *out_predictor_noise);

/**
 * Length in bytes (excluding the NUL) of the `+`-joined subset name.
 *
 * # Safety
 * `ranking` must be a live handle or NULL.
 */
size_t excorr_ranking_subset_len(const struct ExcorrRanking *ranking, size_t index);

/**
 * Copies the `+`-joined subset name into `buf` (NUL-terminated).
 *
 * # Safety
 * `ranking` must be a live handle; `buf` must point to `cap` writable
 * bytes.
 */
enum ExcorrStatus excorr_ranking_subset(const struct ExcorrRanking *ranking,
                                        size_t index,
                                        char *buf,
                                        size_t cap);

/**
 * Releases a ranking handle.
 *
 * # Safety
 * `ranking` must be NULL or a handle not freed before.
 */
void excorr_ranking_free(struct ExcorrRanking *ranking);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXCORR_H */
