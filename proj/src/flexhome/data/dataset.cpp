#include "flexhome/data/dataset.hpp"

#include <cmath>
#include <filesystem>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"

namespace flexhome::data {

SplitRanges split_chrono(std::size_t n) {
    if (n < 10) throw_invalid("split_chrono: need at least 10 samples, got " + format_u64(n));
    SplitRanges s;
    s.train_begin = 0;
    s.train_end = n * 7 / 10;
    s.val_begin = s.train_end;
    s.val_end = n * 9 / 10;
    s.test_begin = s.val_end;
    s.test_end = n;
    return s;
}

Normalizer fit_normalizer(const ml::Tensor& m, std::size_t row_begin, std::size_t row_end,
                          const std::vector<bool>& identity_cols) {
    if (m.shape.size() != 2) throw_invalid("fit_normalizer: expected a 2-d tensor");
    if (row_end <= row_begin || row_end > m.dim(0)) throw_invalid("fit_normalizer: bad row range");
    const std::size_t d = m.dim(1);
    if (!identity_cols.empty() && identity_cols.size() != d)
        throw_invalid("fit_normalizer: identity mask size mismatch");
    const double n = static_cast<double>(row_end - row_begin);
    auto is_identity = [&](std::size_t c) { return !identity_cols.empty() && identity_cols[c]; };

    Normalizer norm;
    norm.mean.assign(d, 0.0);
    norm.stddev.assign(d, 0.0);
    for (std::size_t r = row_begin; r < row_end; ++r)
        for (std::size_t c = 0; c < d; ++c) norm.mean[c] += m.at2(r, c);
    for (std::size_t c = 0; c < d; ++c) norm.mean[c] /= n;
    for (std::size_t r = row_begin; r < row_end; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const double dv = m.at2(r, c) - norm.mean[c];
            norm.stddev[c] += dv * dv;
        }
    for (std::size_t c = 0; c < d; ++c) {
        if (is_identity(c)) {
            norm.mean[c] = 0.0;
            norm.stddev[c] = 1.0;
            continue;
        }
        norm.stddev[c] = std::sqrt(norm.stddev[c] / n);
        if (!(norm.stddev[c] > 0))
            throw_invalid("fit_normalizer: column " + format_u64(c) +
                          " is constant on the training split");
    }
    return norm;
}

void Normalizer::apply(ml::Tensor& m) const {
    const std::size_t d = m.dim(1);
    if (d != mean.size()) throw_invalid("Normalizer::apply: column count mismatch");
    for (std::size_t r = 0; r < m.dim(0); ++r)
        for (std::size_t c = 0; c < d; ++c) m.at2(r, c) = (m.at2(r, c) - mean[c]) / stddev[c];
}

void Normalizer::invert(ml::Tensor& m) const {
    const std::size_t d = m.dim(1);
    if (d != mean.size()) throw_invalid("Normalizer::invert: column count mismatch");
    for (std::size_t r = 0; r < m.dim(0); ++r)
        for (std::size_t c = 0; c < d; ++c) m.at2(r, c) = m.at2(r, c) * stddev[c] + mean[c];
}

WindowSet make_windows(std::size_t n_rows, const WindowSpec& spec, const SplitRanges& split) {
    if (spec.lookback_steps < 1 || spec.horizon_steps < 1 || spec.stride_steps < 1)
        throw_invalid("make_windows: lookback, horizon and stride must all be >= 1");
    const std::size_t min_len = spec.lookback_steps + spec.horizon_steps;
    if (n_rows < min_len)
        throw_invalid("make_windows: series too short: need at least " + format_u64(min_len) +
                      " rows, got " + format_u64(n_rows));

    WindowSet ws;
    auto collect = [&](std::size_t begin, std::size_t end, std::vector<std::size_t>& out) {
        if (end <= begin) return;
        // anchor range such that the input window and the target stay inside
        if (end - begin < min_len) return;
        const std::size_t first = begin + spec.lookback_steps - 1;
        const std::size_t last = end - 1 - spec.horizon_steps;
        for (std::size_t t = first; t <= last; t += spec.stride_steps) out.push_back(t);
    };
    collect(split.train_begin, split.train_end, ws.train);
    collect(split.val_begin, split.val_end, ws.val);
    collect(split.test_begin, split.test_end, ws.test);
    return ws;
}

void gather_windows(const ml::Tensor& features, const ml::Tensor& labels,
                    const std::vector<std::size_t>& anchors, std::size_t i0, std::size_t count,
                    const WindowSpec& spec, ml::Tensor& batch, ml::Tensor& targets) {
    const std::size_t d = features.dim(1);
    const std::size_t out_dim = labels.dim(1);
    batch = ml::Tensor({count, spec.lookback_steps, d});
    targets = ml::Tensor({count, out_dim});
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t t = anchors[i0 + i];
        const std::size_t in_begin = t + 1 - spec.lookback_steps;
        for (std::size_t s = 0; s < spec.lookback_steps; ++s)
            for (std::size_t c = 0; c < d; ++c)
                batch.data[(i * spec.lookback_steps + s) * d + c] = features.at2(in_begin + s, c);
        for (std::size_t c = 0; c < out_dim; ++c)
            targets.at2(i, c) = labels.at2(t + spec.horizon_steps, c);
    }
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i];
    }
    return s;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_double(v[i]);
    }
    return s;
}

std::vector<double> parse_doubles(const Config& cfg, const std::string& key, std::size_t expect) {
    std::vector<double> out;
    for (const auto& item : cfg.get_list(key)) {
        double v;
        if (!parse_double(item, v)) throw_config("manifest key `" + key + "`: bad number `" + item + "`");
        out.push_back(v);
    }
    if (out.size() != expect)
        throw_config("manifest key `" + key + "`: expected " + format_u64(expect) + " values");
    return out;
}

}  // namespace

void save_dataset(const std::string& dir, const Dataset& ds) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_tensor((fs::path(dir) / kFeaturesTensorName).string(), ds.features);
    write_tensor((fs::path(dir) / kLabelsTensorName).string(), ds.labels);

    Config m;
    m.set("dataset.format_version", "1");
    m.set("dataset.task", task_name(ds.task));
    m.set("dataset.step_minutes", format_i64(ds.step_minutes));
    m.set("dataset.start_timestamp_min", format_i64(ds.start_timestamp_min));
    m.set("dataset.trace_hash", ds.trace_hash);
    m.set("dataset.rows", format_u64(ds.features.dim(0)));
    m.set("dataset.feature_cols", join(ds.feature_cols));
    m.set("dataset.label_cols", join(ds.label_cols));
    m.set("window.lookback_steps", format_u64(ds.window.lookback_steps));
    m.set("window.horizon_steps", format_u64(ds.window.horizon_steps));
    m.set("window.stride_steps", format_u64(ds.window.stride_steps));
    m.set("split.train", format_u64(ds.split.train_begin) + ":" + format_u64(ds.split.train_end));
    m.set("split.val", format_u64(ds.split.val_begin) + ":" + format_u64(ds.split.val_end));
    m.set("split.test", format_u64(ds.split.test_begin) + ":" + format_u64(ds.split.test_end));
    m.set("normalizer.feature_mean", join_doubles(ds.feat_norm.mean));
    m.set("normalizer.feature_std", join_doubles(ds.feat_norm.stddev));
    m.set("normalizer.label_mean", join_doubles(ds.label_norm.mean));
    m.set("normalizer.label_std", join_doubles(ds.label_norm.stddev));
    m.write_file((fs::path(dir) / kDatasetManifestName).string());
}

namespace {

std::pair<std::size_t, std::size_t> parse_range(const Config& cfg, const std::string& key) {
    auto parts = split(cfg.require_string(key), ':');
    std::uint64_t b = 0, e = 0;
    if (parts.size() != 2 || !parse_u64(parts[0], b) || !parse_u64(parts[1], e))
        throw_config("manifest key `" + key + "`: expected `begin:end`");
    return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

}  // namespace

Dataset load_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    const std::string manifest_path = (fs::path(dir) / kDatasetManifestName).string();
    Config m = Config::from_file(manifest_path);

    Dataset ds;
    const auto version = m.require_string("dataset.format_version");
    if (version != "1") throw_config(manifest_path + ": unsupported dataset format version " + version);
    ds.task = task_from_name(m.require_string("dataset.task"));
    ds.step_minutes = m.require_i64("dataset.step_minutes");
    ds.start_timestamp_min = m.require_i64("dataset.start_timestamp_min");
    ds.trace_hash = m.require_string("dataset.trace_hash");
    const std::size_t rows = static_cast<std::size_t>(m.require_u64("dataset.rows"));
    for (const auto& s : m.get_list("dataset.feature_cols")) ds.feature_cols.push_back(s);
    for (const auto& s : m.get_list("dataset.label_cols")) ds.label_cols.push_back(s);
    ds.window.lookback_steps = static_cast<std::size_t>(m.require_u64("window.lookback_steps"));
    ds.window.horizon_steps = static_cast<std::size_t>(m.require_u64("window.horizon_steps"));
    ds.window.stride_steps = static_cast<std::size_t>(m.require_u64("window.stride_steps"));
    std::tie(ds.split.train_begin, ds.split.train_end) = parse_range(m, "split.train");
    std::tie(ds.split.val_begin, ds.split.val_end) = parse_range(m, "split.val");
    std::tie(ds.split.test_begin, ds.split.test_end) = parse_range(m, "split.test");
    ds.feat_norm.mean = parse_doubles(m, "normalizer.feature_mean", ds.feature_cols.size());
    ds.feat_norm.stddev = parse_doubles(m, "normalizer.feature_std", ds.feature_cols.size());
    ds.label_norm.mean = parse_doubles(m, "normalizer.label_mean", ds.label_cols.size());
    ds.label_norm.stddev = parse_doubles(m, "normalizer.label_std", ds.label_cols.size());
    m.reject_unknown_keys();

    ds.features = ml::read_tensor((fs::path(dir) / kFeaturesTensorName).string());
    ds.labels = ml::read_tensor((fs::path(dir) / kLabelsTensorName).string());
    if (ds.features.shape.size() != 2 || ds.features.dim(0) != rows ||
        ds.features.dim(1) != ds.feature_cols.size())
        throw_config(dir + ": features tensor shape disagrees with manifest");
    if (ds.labels.shape.size() != 2 || ds.labels.dim(0) != rows || ds.labels.dim(1) != ds.label_cols.size())
        throw_config(dir + ": labels tensor shape disagrees with manifest");
    return ds;
}

}  // namespace flexhome::data
