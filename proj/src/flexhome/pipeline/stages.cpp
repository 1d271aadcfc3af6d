#include "flexhome/pipeline/stages.hpp"

#include <filesystem>
#include <utility>
#include <vector>

#include "flexhome/common/config.hpp"
#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/hash.hpp"
#include "flexhome/common/rng.hpp"
#include "flexhome/common/strconv.hpp"
#include "flexhome/data/dataset.hpp"
#include "flexhome/data/features.hpp"
#include "flexhome/eval/evaluate.hpp"
#include "flexhome/metrics/bounds.hpp"
#include "flexhome/metrics/staircase.hpp"
#include "flexhome/ml/train.hpp"
#include "flexhome/sim/simulate.hpp"

namespace flexhome::pipeline {

namespace fs = std::filesystem;

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// Verifies `path` against the manifest of the directory it lives in, when
// one exists and lists the file. Returns the file's content hash either way.
std::string check_input_hash(const std::string& path) {
    if (!fs::exists(path)) throw_stale("missing input: " + path);
    const std::string actual = hash_file_hex(path);
    const fs::path p(path);
    const std::string manifest_path = (p.parent_path() / "manifest.txt").string();
    if (fs::exists(manifest_path)) {
        Config m = Config::from_file(manifest_path);
        const std::string key = "output." + p.filename().string();
        if (m.has(key)) {
            const std::string expected = m.require_string(key);
            if (expected != actual)
                throw_stale("stale input: " + path + " has hash " + actual +
                            " but its manifest records " + expected);
        }
    }
    return actual;
}

struct ManifestBuilder {
    Config m;

    explicit ManifestBuilder(const std::string& stage) {
        m.set("manifest.format_version", "1");
        m.set("manifest.stage", stage);
        m.set("manifest.tool_version", kToolVersion);
    }

    void input(const std::string& name, const std::string& path, const std::string& hash) {
        m.set("input." + name, path);
        m.set("input." + name + ".hash", hash);
    }

    void output(const std::string& dir, const std::string& filename) {
        m.set("output." + filename, hash_file_hex(join_path(dir, filename)));
    }

    void write(const std::string& dir) { m.write_file(join_path(dir, "manifest.txt")); }
};

Config load_config_with_override(const RunOptions& opts, const std::string& seed_key) {
    Config cfg = Config::from_file(opts.config_path);
    if (opts.seed_override) cfg.set(seed_key, format_u64(*opts.seed_override));
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw_io("cannot create output directory " + dir + ": " + ec.message());
}

void write_snapshot(const Config& resolved, const std::string& dir) {
    resolved.write_file(join_path(dir, "resolved_config.cfg"));
}

sim::SeasonMode season_from_name(const std::string& s) {
    if (s == "auto") return sim::SeasonMode::Auto;
    if (s == "heat_only") return sim::SeasonMode::HeatOnly;
    if (s == "cool_only") return sim::SeasonMode::CoolOnly;
    throw_config("simulate.season must be auto, heat_only or cool_only (got `" + s + "`)");
}

const char* season_name(sim::SeasonMode m) {
    switch (m) {
        case sim::SeasonMode::Auto: return "auto";
        case sim::SeasonMode::HeatOnly: return "heat_only";
        case sim::SeasonMode::CoolOnly: return "cool_only";
    }
    return "auto";
}

}  // namespace

void run_simulate(const RunOptions& opts) {
    Config cfg = load_config_with_override(opts, "simulate.seed");
    ManifestBuilder manifest("simulate");

    // Optional external house/schedule file, inlined for the snapshot.
    if (cfg.has("simulate.house_file")) {
        const std::string house_path = cfg.require_string("simulate.house_file");
        Config house_cfg = Config::from_file(house_path);
        cfg.merge(house_cfg, house_path);
        cfg.erase("simulate.house_file");
        manifest.input("house_file", house_path, hash_file_hex(house_path));
    }

    const std::uint64_t seed = cfg.get_u64("simulate.seed", 1);
    const std::int64_t duration_days = cfg.get_i64("simulate.duration_days", 0);
    std::int64_t duration_min = cfg.get_i64("simulate.duration_min", 0);
    if ((duration_days > 0) == (duration_min > 0))
        throw_config("simulate: set exactly one of simulate.duration_days / simulate.duration_min");
    if (duration_days > 0) duration_min = duration_days * 1440;

    const sim::HouseParams params = sim::house_from_config(cfg);
    const sim::ScheduleSpec schedule = sim::schedule_from_config(cfg);

    sim::SimOptions sopts;
    sopts.season = season_from_name(cfg.get_string("simulate.season", "auto"));
    sopts.changeover_lockout_min = cfg.get_i64("simulate.changeover_lockout_min", 720);
    sopts.initial.t_air_c =
        cfg.get_double("simulate.init_t_air_c", (params.heat_setpoint_c + params.cool_setpoint_c) / 2.0);
    sopts.initial.t_mass_c = cfg.get_double("simulate.init_t_mass_c", sopts.initial.t_air_c);
    sopts.initial.t_tank_c = cfg.get_double("simulate.init_t_tank_c", params.tank_setpoint_c);

    const std::string weather_source = cfg.get_string("simulate.weather", "synth");
    std::vector<sim::WeatherSample> weather;
    std::uint64_t weather_seed = 0;
    std::int64_t weather_days = 0;
    std::string weather_csv_path;
    if (weather_source == "synth") {
        // Default: one day beyond the simulation so downstream forced-off
        // counterfactuals have weather past the end of the trace.
        weather_days = cfg.get_i64("simulate.weather_days", duration_min / 1440 + 1);
        weather_seed = cfg.get_u64("simulate.weather_seed", mix_seed(seed, "simulate/weather"));
        weather = sim::synth_weather(static_cast<int>(weather_days), weather_seed);
    } else if (weather_source == "csv") {
        weather_csv_path = cfg.require_string("simulate.weather_csv");
        manifest.input("weather_csv", weather_csv_path, check_input_hash(weather_csv_path));
        weather = sim::load_weather_csv(weather_csv_path);
    } else {
        throw_config("simulate.weather must be `synth` or `csv` (got `" + weather_source + "`)");
    }

    cfg.reject_unknown_keys();

    const std::vector<sim::TraceFrame> trace = sim::simulate(params, schedule, weather, duration_min, seed, sopts);

    ensure_out_dir(opts.out_dir);
    sim::write_trace_csv(join_path(opts.out_dir, "trace.csv"), trace);
    sim::write_weather_csv(join_path(opts.out_dir, "weather.csv"), weather);

    Config resolved;
    resolved.set("simulate.seed", format_u64(seed));
    resolved.set("simulate.duration_min", format_i64(duration_min));
    resolved.set("simulate.season", season_name(sopts.season));
    resolved.set("simulate.changeover_lockout_min", format_i64(sopts.changeover_lockout_min));
    resolved.set("simulate.init_t_air_c", format_double(sopts.initial.t_air_c));
    resolved.set("simulate.init_t_mass_c", format_double(sopts.initial.t_mass_c));
    resolved.set("simulate.init_t_tank_c", format_double(sopts.initial.t_tank_c));
    resolved.set("simulate.weather", weather_source);
    if (weather_source == "synth") {
        resolved.set("simulate.weather_days", format_i64(weather_days));
        resolved.set("simulate.weather_seed", format_u64(weather_seed));
    } else {
        resolved.set("simulate.weather_csv", weather_csv_path);
    }
    sim::house_to_config(params, resolved);
    sim::schedule_to_config(schedule, resolved);
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, "trace.csv");
    manifest.output(opts.out_dir, "weather.csv");
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

void run_metrics(const RunOptions& opts) {
    Config cfg = Config::from_file(opts.config_path);
    const std::string sim_dir = cfg.require_string("metrics.sim_dir");
    const std::size_t smooth_window =
        static_cast<std::size_t>(cfg.get_u64("metrics.smooth_window", metrics::kDefaultSmoothWindow));
    const std::int64_t rated_window_min =
        cfg.get_i64("metrics.rated_window_min", metrics::kDefaultRatedWindowMin);
    const int cap_min = static_cast<int>(cfg.get_i64("metrics.cap_min", metrics::kDefaultDurationCapMin));
    cfg.reject_unknown_keys();

    ManifestBuilder manifest("metrics");
    const std::string trace_path = join_path(sim_dir, "trace.csv");
    const std::string weather_path = join_path(sim_dir, "weather.csv");
    const std::string sim_config_path = join_path(sim_dir, "resolved_config.cfg");
    manifest.input("trace", trace_path, check_input_hash(trace_path));
    manifest.input("weather", weather_path, check_input_hash(weather_path));
    manifest.input("sim_config", sim_config_path, check_input_hash(sim_config_path));

    const auto trace = sim::load_trace_csv(trace_path);
    const auto weather = sim::load_weather_csv(weather_path);
    const Config sim_cfg = Config::from_file(sim_config_path);
    const sim::HouseParams params = sim::house_from_config(sim_cfg);

    const metrics::PowerBounds bounds = metrics::compute_power_bounds(trace, smooth_window, rated_window_min);
    const metrics::StaircaseSeries stairs =
        metrics::staircase_series(trace, params, weather, cap_min, rated_window_min);

    ensure_out_dir(opts.out_dir);
    metrics::write_bounds_csv(join_path(opts.out_dir, "bounds.csv"), bounds);
    metrics::write_staircase_csv(join_path(opts.out_dir, "staircase.csv"), stairs.staircases);
    metrics::write_durations_csv(join_path(opts.out_dir, "durations.csv"), stairs.devices);

    Config resolved;
    resolved.set("metrics.sim_dir", sim_dir);
    resolved.set("metrics.smooth_window", format_u64(smooth_window));
    resolved.set("metrics.rated_window_min", format_i64(rated_window_min));
    resolved.set("metrics.cap_min", format_i64(cap_min));
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, "bounds.csv");
    manifest.output(opts.out_dir, "staircase.csv");
    manifest.output(opts.out_dir, "durations.csv");
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

void run_dataset(const RunOptions& opts) {
    Config cfg = Config::from_file(opts.config_path);
    const data::Task task = data::task_from_name(cfg.require_string("dataset.task"));
    const std::string sim_dir = cfg.require_string("dataset.sim_dir");
    const std::string metrics_dir = cfg.require_string("dataset.metrics_dir");
    const std::int64_t resample_every = cfg.get_i64("dataset.resample_every", 1);
    const std::size_t lookback = static_cast<std::size_t>(cfg.require_u64("dataset.lookback_steps"));
    const std::int64_t horizon_min = cfg.require_i64("dataset.horizon_min");
    const std::size_t stride = static_cast<std::size_t>(cfg.get_u64("dataset.stride_steps", 1));
    cfg.reject_unknown_keys();
    if (resample_every < 1) throw_config("dataset.resample_every must be >= 1");

    ManifestBuilder manifest("dataset");
    const std::string trace_path = join_path(sim_dir, "trace.csv");
    const std::string trace_hash = check_input_hash(trace_path);
    manifest.input("trace", trace_path, trace_hash);

    const auto trace = sim::load_trace_csv(trace_path);

    metrics::PowerBounds bounds;
    metrics::DeviceFlexSeries durations;
    if (task == data::Task::Bounds) {
        const std::string bounds_path = join_path(metrics_dir, "bounds.csv");
        manifest.input("bounds", bounds_path, check_input_hash(bounds_path));
        bounds = metrics::load_bounds_csv(bounds_path);
        if (bounds.timestamp_min.size() != trace.size() ||
            bounds.timestamp_min.front() != trace.front().timestamp_min)
            throw_stale("dataset: bounds.csv does not align with trace.csv");
    } else {
        const std::string durations_path = join_path(metrics_dir, "durations.csv");
        manifest.input("durations", durations_path, check_input_hash(durations_path));
        durations = metrics::load_durations_csv(durations_path);
        if (durations.timestamp_min.size() != trace.size() ||
            durations.timestamp_min.front() != trace.front().timestamp_min)
            throw_stale("dataset: durations.csv does not align with trace.csv");
    }

    const ml::Tensor full_features = data::build_features(trace, task);
    const ml::Tensor full_labels = data::build_labels(task, bounds, durations);

    // chronological downsampling: every k-th row
    const std::size_t k = static_cast<std::size_t>(resample_every);
    const std::size_t n = (trace.size() + k - 1) / k;
    const std::size_t d = full_features.dim(1);
    const std::size_t out_dim = full_labels.dim(1);
    data::Dataset ds;
    ds.task = task;
    ds.features = ml::Tensor({n, d});
    ds.labels = ml::Tensor({n, out_dim});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) ds.features.at2(i, c) = full_features.at2(i * k, c);
        for (std::size_t c = 0; c < out_dim; ++c) ds.labels.at2(i, c) = full_labels.at2(i * k, c);
    }

    ds.step_minutes = sim::kStepMinutes * resample_every;
    ds.start_timestamp_min = trace.front().timestamp_min;
    ds.trace_hash = trace_hash;
    ds.feature_cols = data::feature_names(task);
    ds.label_cols = data::label_names(task);
    if (horizon_min <= 0 || horizon_min % ds.step_minutes != 0)
        throw_config("dataset.horizon_min must be a positive multiple of the dataset step (" +
                     format_i64(ds.step_minutes) + " min)");
    ds.window.lookback_steps = lookback;
    ds.window.horizon_steps = static_cast<std::size_t>(horizon_min / ds.step_minutes);
    ds.window.stride_steps = stride;
    ds.split = data::split_chrono(n);
    ds.feat_norm = data::fit_normalizer(ds.features, ds.split.train_begin, ds.split.train_end,
                                        data::binary_feature_mask(task));
    ds.label_norm = data::fit_normalizer(ds.labels, ds.split.train_begin, ds.split.train_end);
    ds.feat_norm.apply(ds.features);
    ds.label_norm.apply(ds.labels);

    // fail fast if any split ends up too short for a single window
    (void)data::make_windows(n, ds.window, ds.split);

    ensure_out_dir(opts.out_dir);
    data::save_dataset(opts.out_dir, ds);

    Config resolved;
    resolved.set("dataset.task", data::task_name(task));
    resolved.set("dataset.sim_dir", sim_dir);
    resolved.set("dataset.metrics_dir", metrics_dir);
    resolved.set("dataset.resample_every", format_i64(resample_every));
    resolved.set("dataset.lookback_steps", format_u64(lookback));
    resolved.set("dataset.horizon_min", format_i64(horizon_min));
    resolved.set("dataset.stride_steps", format_u64(stride));
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, data::kDatasetManifestName);
    manifest.output(opts.out_dir, data::kFeaturesTensorName);
    manifest.output(opts.out_dir, data::kLabelsTensorName);
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

namespace {

data::Dataset load_dataset_checked(const std::string& dir, ManifestBuilder& manifest) {
    for (const char* name :
         {data::kDatasetManifestName, data::kFeaturesTensorName, data::kLabelsTensorName}) {
        const std::string path = join_path(dir, name);
        manifest.input(std::string("dataset_") + name, path, check_input_hash(path));
    }
    return data::load_dataset(dir);
}

ml::TrainConfig train_config_from(const Config& cfg, const std::string& prefix) {
    ml::TrainConfig tc;
    tc.learning_rate = cfg.get_double(prefix + ".learning_rate", tc.learning_rate);
    tc.beta1 = cfg.get_double(prefix + ".beta1", tc.beta1);
    tc.beta2 = cfg.get_double(prefix + ".beta2", tc.beta2);
    tc.adam_eps = cfg.get_double(prefix + ".adam_eps", tc.adam_eps);
    tc.batch_size = static_cast<std::size_t>(cfg.get_u64(prefix + ".batch_size", tc.batch_size));
    tc.max_epochs = static_cast<std::size_t>(cfg.get_u64(prefix + ".max_epochs", tc.max_epochs));
    tc.patience = static_cast<std::size_t>(cfg.get_u64(prefix + ".patience", tc.patience));
    tc.seed = cfg.get_u64(prefix + ".seed", tc.seed);
    tc.shuffle_seed = cfg.get_u64(prefix + ".shuffle_seed", 0);
    tc.precision = ml::precision_from_name(cfg.get_string(prefix + ".precision", "f64"));
    tc.validate();
    return tc;
}

void train_config_to(const ml::TrainConfig& tc, const std::string& prefix, Config& out) {
    out.set(prefix + ".learning_rate", format_double(tc.learning_rate));
    out.set(prefix + ".beta1", format_double(tc.beta1));
    out.set(prefix + ".beta2", format_double(tc.beta2));
    out.set(prefix + ".adam_eps", format_double(tc.adam_eps));
    out.set(prefix + ".batch_size", format_u64(tc.batch_size));
    out.set(prefix + ".max_epochs", format_u64(tc.max_epochs));
    out.set(prefix + ".patience", format_u64(tc.patience));
    out.set(prefix + ".seed", format_u64(tc.seed));
    out.set(prefix + ".shuffle_seed", format_u64(tc.shuffle_seed));
    out.set(prefix + ".precision", ml::precision_name(tc.precision));
}

// Writes per-window test predictions next to their targets, in physical units.
void write_predictions_csv(const std::string& path, const data::Dataset& ds, const ml::Weights& w,
                           const std::vector<std::size_t>& anchors) {
    CsvWriter out(path);
    std::vector<std::string> header{"anchor_timestamp_min", "target_timestamp_min"};
    for (const auto& n : ds.label_cols) header.push_back("actual_" + n);
    for (const auto& n : ds.label_cols) header.push_back("pred_" + n);
    out.header(header);

    const std::size_t batch_size = 512;
    ml::Tensor batch, targets;
    for (std::size_t i0 = 0; i0 < anchors.size(); i0 += batch_size) {
        const std::size_t count = std::min(batch_size, anchors.size() - i0);
        data::gather_windows(ds.features, ds.labels, anchors, i0, count, ds.window, batch, targets);
        const ml::Tensor preds = ml::forward(w, batch);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t t = anchors[i0 + i];
            out.field(ds.start_timestamp_min + static_cast<std::int64_t>(t) * ds.step_minutes);
            out.field(ds.start_timestamp_min +
                      static_cast<std::int64_t>(t + ds.window.horizon_steps) * ds.step_minutes);
            for (std::size_t c = 0; c < ds.label_cols.size(); ++c)
                out.field(ds.label_norm.invert_value(c, targets.at2(i, c)));
            for (std::size_t c = 0; c < ds.label_cols.size(); ++c)
                out.field(ds.label_norm.invert_value(c, preds.at2(i, c)));
            out.end_row();
        }
    }
    out.close();
}

}  // namespace

void run_train(const RunOptions& opts) {
    Config cfg = load_config_with_override(opts, "train.seed");
    const std::string dataset_dir = cfg.require_string("train.dataset_dir");
    const ml::ModelKind kind = ml::model_kind_from_name(cfg.require_string("train.model"));
    const std::size_t hidden = static_cast<std::size_t>(cfg.get_u64("train.hidden", 0));
    const std::size_t kernel = static_cast<std::size_t>(cfg.get_u64("train.kernel", 3));
    const std::int64_t horizon_override = cfg.get_i64("train.horizon_min", 0);
    const ml::TrainConfig tc = train_config_from(cfg, "train");
    cfg.reject_unknown_keys();

    ManifestBuilder manifest("train");
    data::Dataset ds = load_dataset_checked(dataset_dir, manifest);
    if (horizon_override > 0) {
        if (horizon_override % ds.step_minutes != 0)
            throw_config("train.horizon_min must be a multiple of the dataset step");
        ds.window.horizon_steps = static_cast<std::size_t>(horizon_override / ds.step_minutes);
    }
    const std::int64_t horizon_min = static_cast<std::int64_t>(ds.window.horizon_steps) * ds.step_minutes;

    ml::ModelSpec spec = ml::default_spec(kind, ds.window.lookback_steps, ds.features.dim(1), ds.labels.dim(1));
    if (hidden > 0 && kind != ml::ModelKind::Linear) spec.hidden = hidden;
    if (kind == ml::ModelKind::Cnn) spec.kernel = kernel;
    spec.validate();

    const data::WindowSet windows = data::make_windows(ds.features.dim(0), ds.window, ds.split);
    const ml::TrainResult tr = ml::train(spec, ds, windows, tc);

    ensure_out_dir(opts.out_dir);
    ml::save_weights(join_path(opts.out_dir, "model.fhw"), tr.weights);
    ml::write_history_csv(join_path(opts.out_dir, "history.csv"), tr.history);

    Config resolved;
    resolved.set("train.dataset_dir", dataset_dir);
    resolved.set("train.model", ml::model_kind_name(kind));
    resolved.set("train.hidden", format_u64(spec.hidden));
    resolved.set("train.kernel", format_u64(spec.kernel));
    resolved.set("train.horizon_min", format_i64(horizon_min));
    train_config_to(tc, "train", resolved);
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, "model.fhw");
    manifest.output(opts.out_dir, "history.csv");
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

void run_evaluate(const RunOptions& opts) {
    Config cfg = Config::from_file(opts.config_path);
    const std::string dataset_dir = cfg.require_string("evaluate.dataset_dir");
    const std::string train_dir = cfg.require_string("evaluate.train_dir");
    cfg.reject_unknown_keys();

    ManifestBuilder manifest("evaluate");
    data::Dataset ds = load_dataset_checked(dataset_dir, manifest);

    const std::string model_path = join_path(train_dir, "model.fhw");
    const std::string train_config_path = join_path(train_dir, "resolved_config.cfg");
    manifest.input("model", model_path, check_input_hash(model_path));
    manifest.input("train_config", train_config_path, check_input_hash(train_config_path));

    const Config train_cfg = Config::from_file(train_config_path);
    const std::int64_t horizon_min = train_cfg.get_i64("train.horizon_min", 0);
    if (horizon_min > 0) {
        if (horizon_min % ds.step_minutes != 0)
            throw_stale("evaluate: train horizon does not fit the dataset step");
        ds.window.horizon_steps = static_cast<std::size_t>(horizon_min / ds.step_minutes);
    }

    const ml::Weights w = ml::load_weights(model_path);
    if (w.spec.input_steps != ds.window.lookback_steps || w.spec.input_features != ds.features.dim(1) ||
        w.spec.output_dim != ds.labels.dim(1))
        throw_invalid("evaluate: model was trained on a different dataset shape");

    const data::WindowSet windows = data::make_windows(ds.features.dim(0), ds.window, ds.split);
    const eval::EvalReport report = eval::evaluate(w, ds, windows.test,
                                                   static_cast<std::int64_t>(ds.window.horizon_steps) *
                                                       ds.step_minutes);

    ensure_out_dir(opts.out_dir);
    eval::write_report_csv(join_path(opts.out_dir, "report.csv"), {report});
    eval::write_report_long_csv(join_path(opts.out_dir, "report_long.csv"), {report});
    write_predictions_csv(join_path(opts.out_dir, "predictions.csv"), ds, w, windows.test);

    Config resolved;
    resolved.set("evaluate.dataset_dir", dataset_dir);
    resolved.set("evaluate.train_dir", train_dir);
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, "report.csv");
    manifest.output(opts.out_dir, "report_long.csv");
    manifest.output(opts.out_dir, "predictions.csv");
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

void run_sweep(const RunOptions& opts) {
    Config cfg = load_config_with_override(opts, "sweep.seed");
    const std::string dataset_dir = cfg.require_string("sweep.dataset_dir");

    eval::SweepOptions sopts;
    for (const auto& name : cfg.get_list("sweep.models"))
        sopts.kinds.push_back(ml::model_kind_from_name(name));
    for (const auto& h : cfg.get_list("sweep.horizons_min")) {
        std::int64_t v = 0;
        if (!parse_i64(h, v)) throw_config("sweep.horizons_min: bad entry `" + h + "`");
        sopts.horizons_min.push_back(v);
    }
    sopts.hidden_override = static_cast<std::size_t>(cfg.get_u64("sweep.hidden", 0));
    sopts.train = train_config_from(cfg, "sweep");
    sopts.threads = static_cast<int>(cfg.get_i64("sweep.threads", 1));
    if (opts.threads) sopts.threads = *opts.threads;
    cfg.reject_unknown_keys();

    ManifestBuilder manifest("sweep");
    const data::Dataset ds = load_dataset_checked(dataset_dir, manifest);

    const std::vector<eval::SweepCell> cells = eval::horizon_sweep(ds, sopts);

    std::vector<eval::EvalReport> reports;
    for (const auto& c : cells)
        if (c.ok) reports.push_back(c.report);

    ensure_out_dir(opts.out_dir);
    eval::write_report_csv(join_path(opts.out_dir, "sweep_report.csv"), reports);
    eval::write_report_long_csv(join_path(opts.out_dir, "sweep_long.csv"), reports);
    {
        CsvWriter err(join_path(opts.out_dir, "sweep_errors.csv"));
        err.header({"task", "model", "horizon_min", "error"});
        for (const auto& c : cells) {
            if (c.ok) continue;
            err.field(data::task_name(ds.task));
            err.field(std::string(ml::model_kind_name(c.kind)));
            err.field(c.horizon_min);
            err.field(c.error);
            err.end_row();
        }
        err.close();
    }

    Config resolved;
    resolved.set("sweep.dataset_dir", dataset_dir);
    {
        std::string models;
        for (std::size_t i = 0; i < sopts.kinds.size(); ++i) {
            if (i) models += ", ";
            models += ml::model_kind_name(sopts.kinds[i]);
        }
        resolved.set("sweep.models", models);
        std::string horizons;
        for (std::size_t i = 0; i < sopts.horizons_min.size(); ++i) {
            if (i) horizons += ", ";
            horizons += format_i64(sopts.horizons_min[i]);
        }
        resolved.set("sweep.horizons_min", horizons);
    }
    resolved.set("sweep.hidden", format_u64(sopts.hidden_override));
    resolved.set("sweep.threads", format_i64(sopts.threads));
    train_config_to(sopts.train, "sweep", resolved);
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, "sweep_report.csv");
    manifest.output(opts.out_dir, "sweep_long.csv");
    manifest.output(opts.out_dir, "sweep_errors.csv");
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

void run_forecast(const RunOptions& opts, const std::string& live_trace_csv) {
    Config cfg = Config::from_file(opts.config_path);
    const std::string dataset_dir = cfg.require_string("forecast.dataset_dir");
    const std::string train_dir = cfg.require_string("forecast.train_dir");
    cfg.reject_unknown_keys();

    ManifestBuilder manifest("forecast");
    data::Dataset ds = load_dataset_checked(dataset_dir, manifest);
    const std::string model_path = join_path(train_dir, "model.fhw");
    const std::string train_config_path = join_path(train_dir, "resolved_config.cfg");
    manifest.input("model", model_path, check_input_hash(model_path));
    manifest.input("train_config", train_config_path, check_input_hash(train_config_path));
    manifest.input("live_trace", live_trace_csv, check_input_hash(live_trace_csv));

    const Config train_cfg = Config::from_file(train_config_path);
    const std::int64_t horizon_min = train_cfg.get_i64("train.horizon_min", 0);
    if (horizon_min > 0) {
        if (horizon_min % ds.step_minutes != 0)
            throw_stale("forecast: train horizon does not fit the dataset step");
        ds.window.horizon_steps = static_cast<std::size_t>(horizon_min / ds.step_minutes);
    }

    const ml::Weights w = ml::load_weights(model_path);
    if (w.spec.input_steps != ds.window.lookback_steps || w.spec.input_features != ds.feature_cols.size())
        throw_invalid("forecast: model does not match the dataset feature layout");

    const auto trace = sim::load_trace_csv(live_trace_csv);
    const std::size_t k = static_cast<std::size_t>(ds.step_minutes / sim::kStepMinutes);
    std::vector<sim::TraceFrame> sampled;
    for (std::size_t i = 0; i < trace.size(); i += k) sampled.push_back(trace[i]);
    if (sampled.size() < ds.window.lookback_steps)
        throw_invalid("forecast: live trace has " + format_u64(sampled.size()) + " usable rows, need " +
                      format_u64(ds.window.lookback_steps));

    ml::Tensor feats = data::build_features(sampled, ds.task);
    ds.feat_norm.apply(feats);

    ensure_out_dir(opts.out_dir);
    CsvWriter out(join_path(opts.out_dir, "forecast.csv"));
    std::vector<std::string> header{"anchor_timestamp_min", "target_timestamp_min"};
    for (const auto& n : ds.label_cols) header.push_back("pred_" + n);
    out.header(header);

    const std::size_t L = ds.window.lookback_steps;
    const std::size_t d = feats.dim(1);
    const std::size_t n_anchors = sampled.size() - L + 1;
    const std::size_t batch_cap = 512;
    for (std::size_t a0 = 0; a0 < n_anchors; a0 += batch_cap) {
        const std::size_t count = std::min(batch_cap, n_anchors - a0);
        ml::Tensor batch({count, L, d});
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t t = a0 + i + L - 1;
            for (std::size_t s = 0; s < L; ++s)
                for (std::size_t c = 0; c < d; ++c)
                    batch.data[(i * L + s) * d + c] = feats.at2(t + 1 - L + s, c);
        }
        const ml::Tensor preds = ml::forward(w, batch);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t t = a0 + i + L - 1;
            const std::int64_t anchor_ts = sampled[t].timestamp_min;
            out.field(anchor_ts);
            out.field(anchor_ts + static_cast<std::int64_t>(ds.window.horizon_steps) * ds.step_minutes);
            for (std::size_t c = 0; c < ds.label_cols.size(); ++c)
                out.field(ds.label_norm.invert_value(c, preds.at2(i, c)));
            out.end_row();
        }
    }
    out.close();

    Config resolved;
    resolved.set("forecast.dataset_dir", dataset_dir);
    resolved.set("forecast.train_dir", train_dir);
    write_snapshot(resolved, opts.out_dir);

    manifest.output(opts.out_dir, "forecast.csv");
    manifest.output(opts.out_dir, "resolved_config.cfg");
    manifest.write(opts.out_dir);
}

}  // namespace flexhome::pipeline
