#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexhome/data/dataset.hpp"
#include "flexhome/ml/model.hpp"

namespace flexhome::ml {

enum class Precision : int { F64 = 0, F32 = 1 };

const char* precision_name(Precision p);
Precision precision_from_name(const std::string& s);

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::size_t batch_size = 128;
    std::size_t max_epochs = 100;
    std::size_t patience = 10;       // epochs without val improvement
    std::uint64_t seed = 1;          // weight init; also shuffling unless overridden
    std::uint64_t shuffle_seed = 0;  // 0 = derive from seed
    Precision precision = Precision::F64;

    void validate() const;
};

struct EpochStats {
    std::size_t epoch = 0;
    double train_mse = 0;
    double val_mse = 0;
};

struct TrainResult {
    Weights weights;  // best-validation weights
    std::vector<EpochStats> history;
    std::size_t best_epoch = 0;
    double best_val_mse = 0;
};

// Mini-batch Adam on the train windows with per-epoch validation MSE and
// early stopping. Deterministic for a fixed config (single-threaded).
// Divergence (non-finite loss or gradient) raises a training fault naming
// the epoch.
TrainResult train(const ModelSpec& spec, const data::Dataset& ds, const data::WindowSet& windows,
                  const TrainConfig& cfg);

// history CSV: epoch,train_mse,val_mse
void write_history_csv(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace flexhome::ml
