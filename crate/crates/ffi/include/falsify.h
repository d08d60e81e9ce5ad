#ifndef FALSIFY_H
#define FALSIFY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FalsifyAlgorithm {
  FALSIFY_ALGORITHM_SINGLE = 0,
  FALSIFY_ALGORITHM_MULTI = 1,
  FALSIFY_ALGORITHM_MAB = 2,
} FalsifyAlgorithm;

/**
 * Result code of every fallible call.
 */
typedef enum FalsifyStatus {
  FALSIFY_STATUS_OK = 0,
  FALSIFY_STATUS_NULL_POINTER = 1,
  FALSIFY_STATUS_INVALID_ARGUMENT = 2,
  FALSIFY_STATUS_PARSE_ERROR = 3,
  FALSIFY_STATUS_EVALUATION_ERROR = 4,
  FALSIFY_STATUS_UNKNOWN_SUT = 5,
  FALSIFY_STATUS_SEARCH_ERROR = 6,
  FALSIFY_STATUS_CALLBACK_ERROR = 7,
  FALSIFY_STATUS_PANIC = 8,
} FalsifyStatus;

/**
 * Parsed STL formula.
 */
typedef struct FalsifyFormula FalsifyFormula;

/**
 * Record of a finished falsification run.
 */
typedef struct FalsifyRun FalsifyRun;

/**
 * Uniformly sampled multi-channel signal.
 */
typedef struct FalsifySignal FalsifySignal;

/**
 * Execution budget of a search; network hyperparameters keep their defaults.
 */
typedef struct FalsifySearchConfig {
  size_t budget;
  double lhs_fraction;
  double delta;
  double warmup_fraction;
} FalsifySearchConfig;

/**
 * Executes one test on a caller-provided system. `inputs` holds `dim` raw
 * (denormalized) input values; the callback writes `n` robustness values to
 * `robustness` and returns 0 on success.
 */
typedef int32_t (*FalsifyExecuteFn)(void *user_data,
                                    const double *inputs,
                                    size_t dim,
                                    double *robustness,
                                    size_t n);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *falsify_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void falsify_string_free(char *s);

/**
 * Parses `text` into a formula handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FalsifyStatus falsify_formula_parse(const char *text, struct FalsifyFormula **out);

/**
 * Fully parenthesized text of a formula; release with `falsify_string_free`.
 *
 * # Safety
 * `formula` must be a live handle and `out` a valid pointer.
 */
enum FalsifyStatus falsify_formula_to_string(const struct FalsifyFormula *formula, char **out);

/**
 * # Safety
 * `formula` must come from `falsify_formula_parse` and not be freed twice.
 */
void falsify_formula_free(struct FalsifyFormula *formula);

/**
 * Builds a signal from `n_channels` names and a channel-major sample array
 * of `n_channels * len` values (`samples[c * len + i]`).
 *
 * # Safety
 * `names` must point to `n_channels` NUL-terminated strings, `samples` to
 * `n_channels * len` doubles, and `out` must be valid.
 */
enum FalsifyStatus falsify_signal_new(double start,
                                      double step,
                                      const char *const *names,
                                      size_t n_channels,
                                      const double *samples,
                                      size_t len,
                                      struct FalsifySignal **out);

/**
 * # Safety
 * `signal` must come from `falsify_signal_new` and not be freed twice.
 */
void falsify_signal_free(struct FalsifySignal *signal);

/**
 * Robustness of `formula` on `signal` at grid time `t0`.
 *
 * # Safety
 * Handles must be live and `out` valid.
 */
enum FalsifyStatus falsify_robustness(const struct FalsifyFormula *formula,
                                      const struct FalsifySignal *signal,
                                      double t0,
                                      double *out);

/**
 * Transmission robustness of a signal with `RPM` and `SPEED` channels.
 *
 * # Safety
 * `signal` must be live and `out` valid.
 */
enum FalsifyStatus falsify_at_robustness(const struct FalsifySignal *signal,
                                         double speed_bound,
                                         double speed_horizon,
                                         double *out);

/**
 * Evaluates mo3d at `x[0..3]` into `out[0..3]`.
 *
 * # Safety
 * `x` and `out` must each point to three doubles.
 */
enum FalsifyStatus falsify_mo3d(const double *x, double *out);

/**
 * Budget 80, LHS 25%, delta 0.05, warm-up 50%.
 */
struct FalsifySearchConfig falsify_search_config_default(void);

/**
 * Runs a search against a built-in system (`"mo3d"` or `"at-surrogate"`).
 *
 * # Safety
 * `sut` must be a NUL-terminated string; `config` may be NULL for defaults;
 * `out` must be valid.
 */
enum FalsifyStatus falsify_run_builtin(const char *sut,
                                       enum FalsifyAlgorithm algorithm,
                                       const struct FalsifySearchConfig *config,
                                       uint64_t seed,
                                       struct FalsifyRun **out);

/**
 * Runs a search against a caller-implemented system with raw input ranges
 * `[lo[i], hi[i]]` for `i < dim` and `n_requirements` robustness outputs.
 *
 * # Safety
 * `lo` and `hi` must point to `dim` doubles; `execute` must be safe to call
 * with `user_data` for the duration of the call; `out` must be valid.
 */
enum FalsifyStatus falsify_run_callback(const double *lo,
                                        const double *hi,
                                        size_t dim,
                                        size_t n_requirements,
                                        FalsifyExecuteFn execute,
                                        void *user_data,
                                        enum FalsifyAlgorithm algorithm,
                                        const struct FalsifySearchConfig *config,
                                        uint64_t seed,
                                        struct FalsifyRun **out);

/**
 * # Safety
 * `run` must come from a `falsify_run_*` call and not be freed twice.
 */
void falsify_run_free(struct FalsifyRun *run);

/**
 * Whether the run found a test with robustness `<= 0`. NULL gives false.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
bool falsify_run_falsified(const struct FalsifyRun *run);

/**
 * Number of executed tests. NULL gives 0.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
size_t falsify_run_len(const struct FalsifyRun *run);

/**
 * Test dimension of the run. NULL gives 0.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
size_t falsify_run_dim(const struct FalsifyRun *run);

/**
 * Number of requirements of the run. NULL gives 0.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
size_t falsify_run_requirements(const struct FalsifyRun *run);

/**
 * Copies execution `index` (zero-based): the normalized test into
 * `test_out[0..dim]` and the raw robustness into `robustness_out[0..n]`.
 * Either output may be NULL.
 *
 * # Safety
 * Non-NULL outputs must have room for `falsify_run_dim` and
 * `falsify_run_requirements` doubles respectively.
 */
enum FalsifyStatus falsify_run_row(const struct FalsifyRun *run,
                                   size_t index,
                                   double *test_out,
                                   double *robustness_out);

/**
 * JSON serialization of the full run record; release with
 * `falsify_string_free`.
 *
 * # Safety
 * `run` must be live and `out` valid.
 */
enum FalsifyStatus falsify_run_to_json(const struct FalsifyRun *run, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FALSIFY_H */
