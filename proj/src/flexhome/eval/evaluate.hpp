#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexhome/data/dataset.hpp"
#include "flexhome/ml/model.hpp"
#include "flexhome/ml/train.hpp"

namespace flexhome::eval {

// Errors are reported in physical units (kW for bounds, minutes for
// durations): predictions and targets are denormalized before differencing.
struct EvalReport {
    std::string task;
    std::string model;
    std::int64_t horizon_min = 0;
    double mse = 0;
    double rmse = 0;
    double max_abs_err = 0;
    std::size_t n = 0;  // evaluated windows
    std::vector<std::string> output_names;
    std::vector<double> per_output_mse;
};

EvalReport evaluate(const ml::Weights& w, const data::Dataset& ds,
                    const std::vector<std::size_t>& test_anchors, std::int64_t horizon_min);

// One (kind, horizon) grid cell outcome; failed cells carry an error string
// and no report, and the sweep carries on.
struct SweepCell {
    ml::ModelKind kind = ml::ModelKind::Linear;
    std::int64_t horizon_min = 0;
    bool ok = false;
    EvalReport report;
    std::string error;
};

struct SweepOptions {
    std::vector<ml::ModelKind> kinds;
    std::vector<std::int64_t> horizons_min;
    ml::TrainConfig train;
    // 0 = Table-1 defaults (ann/cnn 512, lstm 32); otherwise override width.
    std::size_t hidden_override = 0;
    int threads = 1;
};

// Trains and evaluates one model per grid cell. Cell seeds derive from the
// base seed plus the cell coordinates, so any cell rerun standalone with the
// same derived seed reproduces the grid entry exactly. Results are ordered
// (kind, horizon) regardless of thread count.
std::vector<SweepCell> horizon_sweep(const data::Dataset& ds, const SweepOptions& opts);

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, ml::ModelKind kind, std::int64_t horizon_min);

// report CSV: task,model,horizon_min,mse,rmse,max_abs_err,n
void write_report_csv(const std::string& path, const std::vector<EvalReport>& reports);
// long-form plot data: task,model,horizon_min,output,metric,value
void write_report_long_csv(const std::string& path, const std::vector<EvalReport>& reports);

}  // namespace flexhome::eval
