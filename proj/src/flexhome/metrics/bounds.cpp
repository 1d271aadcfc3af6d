#include "flexhome/metrics/bounds.hpp"

#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"
#include "flexhome/metrics/rolling_max.hpp"

namespace flexhome::metrics {

std::vector<double> smooth(std::span<const double> series, std::size_t window) {
    if (window == 0 || window % 2 == 0) throw_invalid("smooth: window must be odd and >= 1");
    const std::size_t half = window / 2;
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::size_t h = half;
        if (i < h) h = i;
        if (series.size() - 1 - i < h) h = series.size() - 1 - i;
        double acc = 0;
        for (std::size_t j = i - h; j <= i + h; ++j) acc += series[j];
        out[i] = acc / static_cast<double>(2 * h + 1);
    }
    return out;
}

std::vector<double> rated_power(std::span<const double> device_kw, std::int64_t window_min,
                                std::int64_t sample_spacing_min) {
    if (device_kw.empty()) throw_invalid("rated_power: empty series");
    if (window_min <= 0 || sample_spacing_min <= 0)
        throw_invalid("rated_power: window and spacing must be > 0");
    std::size_t window_samples = static_cast<std::size_t>(window_min / sample_spacing_min);
    if (window_samples == 0) window_samples = 1;
    return rolling_max(device_kw, window_samples);
}

PowerBounds compute_power_bounds(std::span<const sim::TraceFrame> trace, std::size_t smooth_window,
                                 std::int64_t rated_window_min) {
    if (trace.empty()) throw_invalid("compute_power_bounds: empty trace");
    if (smooth_window == 0 || smooth_window % 2 == 0)
        throw_invalid("compute_power_bounds: smooth window must be odd and >= 1");

    const std::size_t n = trace.size();
    std::vector<double> hvac(n), wh(n);
    for (std::size_t i = 0; i < n; ++i) {
        hvac[i] = trace[i].hvac_kw;
        wh[i] = trace[i].wh_kw;
    }
    const std::vector<double> rated_hvac = rated_power(hvac, rated_window_min);
    const std::vector<double> rated_wh = rated_power(wh, rated_window_min);

    PowerBounds b;
    b.timestamp_min.resize(n);
    b.lower_raw_kw.resize(n);
    b.upper_raw_kw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = trace[i];
        b.timestamp_min[i] = f.timestamp_min;
        b.lower_raw_kw[i] = f.net_kw - f.hvac_kw - f.wh_kw;
        b.upper_raw_kw[i] = f.net_kw + (rated_hvac[i] - f.hvac_kw) + (rated_wh[i] - f.wh_kw);
    }
    b.lower_kw = smooth(b.lower_raw_kw, smooth_window);
    b.upper_kw = smooth(b.upper_raw_kw, smooth_window);
    return b;
}

void write_bounds_csv(const std::string& path, const PowerBounds& b) {
    CsvWriter w(path);
    w.header({"timestamp_min", "lower_kw", "upper_kw", "lower_raw_kw", "upper_raw_kw"});
    for (std::size_t i = 0; i < b.timestamp_min.size(); ++i) {
        w.field(b.timestamp_min[i]);
        w.field(b.lower_kw[i]);
        w.field(b.upper_kw[i]);
        w.field(b.lower_raw_kw[i]);
        w.field(b.upper_raw_kw[i]);
        w.end_row();
    }
    w.close();
}

PowerBounds load_bounds_csv(const std::string& path) {
    CsvTable t = read_csv(path, {"timestamp_min", "lower_kw", "upper_kw", "lower_raw_kw", "upper_raw_kw"});
    PowerBounds b;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        b.timestamp_min.push_back(csv_i64(t, r, 0, path));
        b.lower_kw.push_back(csv_double(t, r, 1, path));
        b.upper_kw.push_back(csv_double(t, r, 2, path));
        b.lower_raw_kw.push_back(csv_double(t, r, 3, path));
        b.upper_raw_kw.push_back(csv_double(t, r, 4, path));
    }
    if (b.timestamp_min.empty()) throw_io(path + ": no bounds rows");
    return b;
}

}  // namespace flexhome::metrics
