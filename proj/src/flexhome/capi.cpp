#include "flexhome.h"

#include <cstring>
#include <string>
#include <vector>

#include "flexhome/common/errors.hpp"
#include "flexhome/ml/model.hpp"
#include "flexhome/pipeline/stages.hpp"
#include "flexhome/sim/simulate.hpp"

using namespace flexhome;

namespace {

thread_local std::string g_last_error;

fh_status set_error(ErrorCategory cat, const char* what) {
    g_last_error = what ? what : "";
    return static_cast<fh_status>(static_cast<int>(cat));
}

template <typename Fn>
fh_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FH_OK;
    } catch (const Error& e) {
        return set_error(e.category(), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(ErrorCategory::Internal, "out of memory");
    } catch (const std::exception& e) {
        return set_error(ErrorCategory::Internal, e.what());
    } catch (...) {
        return set_error(ErrorCategory::Internal, "unknown error");
    }
}

}  // namespace

struct fh_run {
    pipeline::RunOptions opts;
};

struct fh_trace {
    std::vector<sim::TraceFrame> frames;
};

struct fh_model {
    ml::Weights weights;
};

extern "C" {

const char* fh_version(void) { return pipeline::kToolVersion; }

const char* fh_status_name(fh_status s) {
    switch (s) {
        case FH_OK: return "ok";
        case FH_ERR_CONFIG: return "config";
        case FH_ERR_STALE_INPUT: return "stale-input";
        case FH_ERR_IO: return "io";
        case FH_ERR_SIM_FAULT: return "sim-fault";
        case FH_ERR_TRAIN_FAULT: return "train-fault";
        case FH_ERR_INVALID_ARG: return "invalid-arg";
        case FH_ERR_INTERNAL: return "internal";
    }
    return "internal";
}

const char* fh_last_error(void) { return g_last_error.c_str(); }
void fh_clear_error(void) { g_last_error.clear(); }

fh_status fh_run_create(const char* config_path, const char* out_dir, fh_run** out) {
    if (!config_path || !out_dir || !out) return set_error(ErrorCategory::InvalidArg, "null argument");
    return guarded([&] {
        auto* run = new fh_run;
        run->opts.config_path = config_path;
        run->opts.out_dir = out_dir;
        *out = run;
    });
}

void fh_run_set_seed(fh_run* run, uint64_t seed) {
    if (run) run->opts.seed_override = seed;
}

void fh_run_set_threads(fh_run* run, int threads) {
    if (run) run->opts.threads = threads;
}

void fh_run_destroy(fh_run* run) { delete run; }

#define FH_RUN_STAGE(name, fn)                                                         \
    fh_status name(fh_run* run) {                                                      \
        if (!run) return set_error(ErrorCategory::InvalidArg, "null run handle");      \
        return guarded([&] { fn(run->opts); });                                        \
    }

FH_RUN_STAGE(fh_run_simulate, pipeline::run_simulate)
FH_RUN_STAGE(fh_run_metrics, pipeline::run_metrics)
FH_RUN_STAGE(fh_run_dataset, pipeline::run_dataset)
FH_RUN_STAGE(fh_run_train, pipeline::run_train)
FH_RUN_STAGE(fh_run_evaluate, pipeline::run_evaluate)
FH_RUN_STAGE(fh_run_sweep, pipeline::run_sweep)

#undef FH_RUN_STAGE

fh_status fh_run_forecast(fh_run* run, const char* live_trace_csv) {
    if (!run) return set_error(ErrorCategory::InvalidArg, "null run handle");
    if (!live_trace_csv) return set_error(ErrorCategory::InvalidArg, "null trace path");
    return guarded([&] { pipeline::run_forecast(run->opts, live_trace_csv); });
}

fh_status fh_trace_load_csv(const char* path, fh_trace** out) {
    if (!path || !out) return set_error(ErrorCategory::InvalidArg, "null argument");
    return guarded([&] {
        auto frames = sim::load_trace_csv(path);
        auto* t = new fh_trace;
        t->frames = std::move(frames);
        *out = t;
    });
}

size_t fh_trace_len(const fh_trace* trace) { return trace ? trace->frames.size() : 0; }

fh_status fh_trace_frame_at(const fh_trace* trace, size_t index, fh_trace_frame* out) {
    if (!trace || !out) return set_error(ErrorCategory::InvalidArg, "null argument");
    if (index >= trace->frames.size())
        return set_error(ErrorCategory::InvalidArg, "frame index out of range");
    const sim::TraceFrame& f = trace->frames[index];
    out->timestamp_min = f.timestamp_min;
    out->net_kw = f.net_kw;
    out->hvac_kw = f.hvac_kw;
    out->wh_kw = f.wh_kw;
    out->base_kw = f.base_kw;
    out->t_air_c = f.t_air_c;
    out->t_tank_c = f.t_tank_c;
    out->t_out_c = f.t_out_c;
    out->hvac_mode = static_cast<int32_t>(f.hvac_mode);
    out->wh_on = f.wh_on ? 1 : 0;
    return FH_OK;
}

void fh_trace_destroy(fh_trace* trace) { delete trace; }

fh_status fh_model_load(const char* path, fh_model** out) {
    if (!path || !out) return set_error(ErrorCategory::InvalidArg, "null argument");
    return guarded([&] {
        auto w = ml::load_weights(path);
        auto* m = new fh_model;
        m->weights = std::move(w);
        *out = m;
    });
}

fh_status fh_model_info_get(const fh_model* model, fh_model_info* out) {
    if (!model || !out) return set_error(ErrorCategory::InvalidArg, "null argument");
    const ml::ModelSpec& s = model->weights.spec;
    out->kind = static_cast<int32_t>(s.kind);
    out->input_steps = s.input_steps;
    out->input_features = s.input_features;
    out->output_dim = s.output_dim;
    out->hidden = s.hidden;
    out->kernel = s.kernel;
    return FH_OK;
}

fh_status fh_model_predict(const fh_model* model, const double* window, size_t window_len,
                           double* out, size_t out_len) {
    if (!model || !window || !out) return set_error(ErrorCategory::InvalidArg, "null argument");
    const ml::ModelSpec& s = model->weights.spec;
    if (window_len != s.input_steps * s.input_features)
        return set_error(ErrorCategory::InvalidArg, "window length does not match model input shape");
    if (out_len < s.output_dim)
        return set_error(ErrorCategory::InvalidArg, "output buffer too small");
    return guarded([&] {
        ml::Tensor batch({1, s.input_steps, s.input_features});
        std::memcpy(batch.data.data(), window, window_len * sizeof(double));
        const ml::Tensor preds = ml::forward(model->weights, batch);
        std::memcpy(out, preds.data.data(), s.output_dim * sizeof(double));
    });
}

void fh_model_destroy(fh_model* model) { delete model; }

}  // extern "C"
