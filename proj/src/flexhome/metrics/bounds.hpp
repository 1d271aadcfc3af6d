#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flexhome/sim/simulate.hpp"

namespace flexhome::metrics {

inline constexpr std::int64_t kDefaultRatedWindowMin = 10080;  // one week
inline constexpr std::size_t kDefaultSmoothWindow = 5;         // 15 min at 3-min data

// Per-timestep feasible consumption range. `lower_raw`/`upper_raw` satisfy
// lower_raw <= net <= upper_raw exactly; the smoothed variants are moving
// averages and may be exceeded slightly by the net load.
struct PowerBounds {
    std::vector<std::int64_t> timestamp_min;
    std::vector<double> lower_kw;      // smoothed
    std::vector<double> upper_kw;      // smoothed
    std::vector<double> lower_raw_kw;
    std::vector<double> upper_raw_kw;
};

// Centered moving average with an odd window; at the edges the window shrinks
// symmetrically to the available samples. Window 1 is the identity.
std::vector<double> smooth(std::span<const double> series, std::size_t window);

// Trailing one-week maximum of a device's electric draw ("rated" power).
std::vector<double> rated_power(std::span<const double> device_kw, std::int64_t window_min = kDefaultRatedWindowMin,
                                std::int64_t sample_spacing_min = sim::kStepMinutes);

// Lower bound: net minus flexible-device consumption (= the non-flexible
// base load). Upper bound: net plus the headroom of each flexible device up
// to its rated power. Both are also returned smoothed.
PowerBounds compute_power_bounds(std::span<const sim::TraceFrame> trace, std::size_t smooth_window = kDefaultSmoothWindow,
                                 std::int64_t rated_window_min = kDefaultRatedWindowMin);

// CSV: timestamp_min,lower_kw,upper_kw,lower_raw_kw,upper_raw_kw
void write_bounds_csv(const std::string& path, const PowerBounds& bounds);
PowerBounds load_bounds_csv(const std::string& path);

}  // namespace flexhome::metrics
