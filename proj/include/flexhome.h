/*
 * flexhome — residential load-flexibility simulation, metrics and
 * forecasting, exposed as a C shared-library API.
 *
 * All functions return fh_status; FH_OK is 0. On failure a thread-local
 * message is available through fh_last_error(). Handles are opaque and must
 * be released with their matching *_destroy function.
 */

#ifndef FLEXHOME_H
#define FLEXHOME_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FH_API __declspec(dllexport)
#else
#define FH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fh_status {
    FH_OK = 0,
    FH_ERR_CONFIG = 2,      /* config parse/validation failure        */
    FH_ERR_STALE_INPUT = 3, /* missing input or manifest hash mismatch */
    FH_ERR_IO = 4,          /* file read/write/parse failure          */
    FH_ERR_SIM_FAULT = 5,   /* non-finite simulation state            */
    FH_ERR_TRAIN_FAULT = 6, /* training divergence                    */
    FH_ERR_INVALID_ARG = 7,
    FH_ERR_INTERNAL = 8
} fh_status;

FH_API const char* fh_version(void);
FH_API const char* fh_status_name(fh_status s);

/* Message for the most recent failure on this thread ("" if none). */
FH_API const char* fh_last_error(void);
FH_API void fh_clear_error(void);

/* ---- pipeline stages ------------------------------------------------- */

/* A run binds a stage config file to an output directory. Optional seed and
 * thread-count overrides mirror the CLI flags. */
typedef struct fh_run fh_run;

FH_API fh_status fh_run_create(const char* config_path, const char* out_dir, fh_run** out);
FH_API void fh_run_set_seed(fh_run* run, uint64_t seed);
FH_API void fh_run_set_threads(fh_run* run, int threads);
FH_API void fh_run_destroy(fh_run* run);

FH_API fh_status fh_run_simulate(fh_run* run);
FH_API fh_status fh_run_metrics(fh_run* run);
FH_API fh_status fh_run_dataset(fh_run* run);
FH_API fh_status fh_run_train(fh_run* run);
FH_API fh_status fh_run_evaluate(fh_run* run);
FH_API fh_status fh_run_sweep(fh_run* run);
FH_API fh_status fh_run_forecast(fh_run* run, const char* live_trace_csv);

/* ---- traces ----------------------------------------------------------- */

typedef struct fh_trace fh_trace;

/* hvac_mode: 0 = off, 1 = heat, 2 = cool */
typedef struct fh_trace_frame {
    int64_t timestamp_min;
    double net_kw;
    double hvac_kw;
    double wh_kw;
    double base_kw;
    double t_air_c;
    double t_tank_c;
    double t_out_c;
    int32_t hvac_mode;
    int32_t wh_on;
} fh_trace_frame;

FH_API fh_status fh_trace_load_csv(const char* path, fh_trace** out);
FH_API size_t fh_trace_len(const fh_trace* trace);
FH_API fh_status fh_trace_frame_at(const fh_trace* trace, size_t index, fh_trace_frame* out);
FH_API void fh_trace_destroy(fh_trace* trace);

/* ---- trained models ---------------------------------------------------- */

typedef struct fh_model fh_model;

/* kind: 0 = linear, 1 = ann, 2 = cnn, 3 = lstm */
typedef struct fh_model_info {
    int32_t kind;
    uint64_t input_steps;
    uint64_t input_features;
    uint64_t output_dim;
    uint64_t hidden;
    uint64_t kernel;
} fh_model_info;

FH_API fh_status fh_model_load(const char* path, fh_model** out);
FH_API fh_status fh_model_info_get(const fh_model* model, fh_model_info* out);

/* Runs the model on one window of normalized features laid out as
 * [input_steps][input_features]; writes output_dim normalized values. */
FH_API fh_status fh_model_predict(const fh_model* model, const double* window, size_t window_len,
                                  double* out, size_t out_len);
FH_API void fh_model_destroy(fh_model* model);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FLEXHOME_H */
