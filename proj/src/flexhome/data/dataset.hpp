#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexhome/common/config.hpp"
#include "flexhome/data/features.hpp"
#include "flexhome/ml/tensor.hpp"

namespace flexhome::data {

// Chronological 70/20/10 row ranges, [begin, end).
struct SplitRanges {
    std::size_t train_begin = 0, train_end = 0;
    std::size_t val_begin = 0, val_end = 0;
    std::size_t test_begin = 0, test_end = 0;
};

SplitRanges split_chrono(std::size_t n_samples);

// Per-column z-score statistics fit on the training rows only. Constant
// columns are rejected (std would be 0).
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    void apply(ml::Tensor& m) const;
    void invert(ml::Tensor& m) const;
    double invert_value(std::size_t col, double v) const { return v * stddev.at(col) + mean.at(col); }
};

// Columns flagged in `identity_cols` (0/1 indicator features) keep identity
// stats (mean 0, std 1) instead of being z-scored and are exempt from the
// constant-column check.
Normalizer fit_normalizer(const ml::Tensor& m, std::size_t row_begin, std::size_t row_end,
                          const std::vector<bool>& identity_cols = {});

struct WindowSpec {
    std::size_t lookback_steps = 1;
    std::size_t horizon_steps = 1;
    std::size_t stride_steps = 1;
};

// A window is identified by its anchor t: inputs are rows
// [t - lookback + 1, t], the target is the label row at t + horizon. Windows
// never straddle a split boundary: the full input range and the target must
// lie inside the same split.
struct WindowSet {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

WindowSet make_windows(std::size_t n_rows, const WindowSpec& spec, const SplitRanges& split);

// Copies the window inputs for `anchors[i0..i0+count)` into a [count,
// lookback, d] batch and the targets into [count, out_dim].
void gather_windows(const ml::Tensor& features, const ml::Tensor& labels,
                    const std::vector<std::size_t>& anchors, std::size_t i0, std::size_t count,
                    const WindowSpec& spec, ml::Tensor& batch, ml::Tensor& targets);

// The on-disk dataset artifact: normalized feature/label tensors plus a
// manifest that pins everything needed to rebuild or consume them.
struct Dataset {
    Task task = Task::Bounds;
    std::int64_t step_minutes = 0;          // spacing after any downsampling
    std::int64_t start_timestamp_min = 0;
    std::string trace_hash;
    WindowSpec window;
    SplitRanges split;
    Normalizer feat_norm;
    Normalizer label_norm;
    ml::Tensor features;  // [n, d] normalized
    ml::Tensor labels;    // [n, out_dim] normalized
    std::vector<std::string> feature_cols;
    std::vector<std::string> label_cols;
};

void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

inline constexpr const char* kDatasetManifestName = "dataset_manifest.cfg";
inline constexpr const char* kFeaturesTensorName = "features.fht";
inline constexpr const char* kLabelsTensorName = "labels.fht";

}  // namespace flexhome::data
