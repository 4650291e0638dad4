/* mssvdd - multimodal subspace one-class classification toolkit.
 *
 * C interface of the shared library: opaque handles, integer status codes,
 * thread-local error messages. All paths are UTF-8, all arrays are plain
 * double/int buffers owned by the caller unless stated otherwise.
 */
#ifndef MSSVDD_H
#define MSSVDD_H

#include <stddef.h>

#if defined(_WIN32)
#define MSVD_API __declspec(dllexport)
#else
#define MSVD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msvd_status {
  MSVD_OK = 0,
  MSVD_ERR_CONFIG = 2,      /* bad or missing configuration (CLI exit code 2) */
  MSVD_ERR_DATA = 3,        /* unreadable or malformed data (CLI exit code 3) */
  MSVD_ERR_INVALID_ARG = 4,
  MSVD_ERR_IO = 5,
  MSVD_ERR_NUMERIC = 6,
  MSVD_ERR_INTERNAL = 7
} msvd_status;

typedef enum msvd_decision {
  MSVD_DS1 = 1, /* AND over modalities */
  MSVD_DS2 = 2, /* OR over modalities */
  MSVD_DS3 = 3, /* first modality */
  MSVD_DS4 = 4  /* second modality */
} msvd_decision;

typedef struct msvd_model msvd_model;

MSVD_API const char* msvd_version(void);

/* Message for the most recent failing call on this thread; never NULL. */
MSVD_API const char* msvd_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment driver (configuration files described in the README)    */

/* Full protocol: splits, CV grid search, refit, evaluation, artifacts
 * (rows.csv, summary.csv/.md, models/) under the configured output dir. */
MSVD_API msvd_status msvd_run_train(const char* config_path);

/* Grid search only; writes grid.csv under the configured output dir. */
MSVD_API msvd_status msvd_run_grid(const char* config_path);

/* Merge rows.csv files under runs_dir into report.md or report.csv. */
MSVD_API msvd_status msvd_run_report(const char* runs_dir, const char* format);

/* ------------------------------------------------------------------ */
/* Models                                                              */

MSVD_API msvd_status msvd_model_load(const char* path, msvd_model** out);
MSVD_API msvd_status msvd_model_save(const msvd_model* model, const char* path);
MSVD_API void msvd_model_free(msvd_model* model);

MSVD_API msvd_status msvd_model_modalities(const msvd_model* model, size_t* count);
MSVD_API msvd_status msvd_model_input_dim(const msvd_model* model, size_t modality, size_t* dim);
MSVD_API msvd_status msvd_model_radius2(const msvd_model* model, double* r2);
MSVD_API msvd_status msvd_model_decision(const msvd_model* model, int* decision);

/* Classify one item. xs[m] points at dims[m] doubles for modality m.
 * Outputs (each optional): squared distances, per-modality 0/1 labels, and
 * the fused 0/1 label under the model's decision strategy. */
MSVD_API msvd_status msvd_model_decide(const msvd_model* model, const double* const* xs,
                                       const size_t* dims, size_t m_count, double* dist2,
                                       int* labels, int* fused);

/* Evaluate a model against a dataset file of the kind it was trained on
 * (robot block file or SPECTF rows). metrics: accu, tpr, tnr, pre, f1, gmean.
 * counts (optional): tp, fp, tn, fn. */
MSVD_API msvd_status msvd_model_evaluate(const msvd_model* model, const char* data_path,
                                         double metrics[6], long counts[4]);

#ifdef __cplusplus
}
#endif

#endif /* MSSVDD_H */
