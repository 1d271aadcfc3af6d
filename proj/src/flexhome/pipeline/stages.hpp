#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace flexhome::pipeline {

inline constexpr const char* kToolVersion = "0.1.0";

// Options shared by every stage entry point. `seed_override` replaces the
// stage's `<stage>.seed` config key; `threads` only affects the sweep stage.
struct RunOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads;
};

// Each stage validates its config (unknown keys are errors), runs, and
// leaves a self-describing output directory: the artifacts, a
// resolved_config.cfg snapshot that reproduces the run bit-exactly, and a
// manifest.txt with input/output content hashes. Inputs that live in a
// directory with a manifest are hash-checked; a mismatch is a stale-input
// error.
void run_simulate(const RunOptions& opts);
void run_metrics(const RunOptions& opts);
void run_dataset(const RunOptions& opts);
void run_train(const RunOptions& opts);
void run_evaluate(const RunOptions& opts);
void run_sweep(const RunOptions& opts);
void run_forecast(const RunOptions& opts, const std::string& live_trace_csv);

}  // namespace flexhome::pipeline
