// flexhome command-line front end. Wires the pipeline stages exposed by the
// shared-library C API; every subcommand takes a config file and an output
// directory and leaves a reproducible, self-describing artifact directory.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "flexhome.h"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = 0;
    bool has_threads = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "stage config file")->required();
    cmd->add_option("--out", args.out, "output directory")->required();
    cmd->add_option("--seed", args.seed, "override the stage's config seed")
        ->each([&args](const std::string&) { args.has_seed = true; });
    cmd->add_option("--threads", args.threads, "worker threads (sweep only, default 1)")
        ->each([&args](const std::string&) { args.has_threads = true; });
}

int run_stage(const CommonArgs& args, fh_status (*stage)(fh_run*), const char* forecast_trace = nullptr,
              fh_status (*forecast)(fh_run*, const char*) = nullptr) {
    fh_run* run = nullptr;
    fh_status st = fh_run_create(args.config.c_str(), args.out.c_str(), &run);
    if (st == FH_OK) {
        if (args.has_seed) fh_run_set_seed(run, args.seed);
        if (args.has_threads) fh_run_set_threads(run, args.threads);
        st = forecast ? forecast(run, forecast_trace) : stage(run);
    }
    fh_run_destroy(run);
    if (st != FH_OK) {
        std::fprintf(stderr, "error: %s: %s\n", fh_status_name(st), fh_last_error());
        return static_cast<int>(st);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flexhome: simulate a home, quantify its load flexibility, forecast it"};
    app.set_version_flag("--version", std::string(fh_version()));
    app.require_subcommand(1);

    CommonArgs args;
    std::string forecast_trace;

    CLI::App* simulate = app.add_subcommand("simulate", "produce a disaggregated 3-minute load trace");
    CLI::App* metrics = app.add_subcommand("metrics", "compute power bounds and the flexibility staircase");
    CLI::App* dataset = app.add_subcommand("dataset", "build a normalized, windowed forecasting dataset");
    CLI::App* train = app.add_subcommand("train", "train one forecasting model");
    CLI::App* evaluate = app.add_subcommand("evaluate", "report test-set errors in physical units");
    CLI::App* sweep = app.add_subcommand("sweep", "train/evaluate a model-kind x horizon grid");
    CLI::App* forecast = app.add_subcommand("forecast", "predict metrics from a live trace CSV");

    for (CLI::App* cmd : {simulate, metrics, dataset, train, evaluate, sweep, forecast})
        add_common(cmd, args);
    forecast->add_option("--trace", forecast_trace, "live trace CSV to forecast from")->required();

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return run_stage(args, fh_run_simulate);
    if (metrics->parsed()) return run_stage(args, fh_run_metrics);
    if (dataset->parsed()) return run_stage(args, fh_run_dataset);
    if (train->parsed()) return run_stage(args, fh_run_train);
    if (evaluate->parsed()) return run_stage(args, fh_run_evaluate);
    if (sweep->parsed()) return run_stage(args, fh_run_sweep);
    if (forecast->parsed()) return run_stage(args, nullptr, forecast_trace.c_str(), fh_run_forecast);
    return 0;
}
