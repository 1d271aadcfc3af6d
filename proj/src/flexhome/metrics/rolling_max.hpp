#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "flexhome/common/errors.hpp"

namespace flexhome::metrics {

// Trailing-window maximum via a monotonic non-increasing deque, O(n) total.
// The window is (t - window_samples, t], i.e. it includes the current sample,
// so rolling_max(x)[t] >= x[t] by construction. Before a full window has
// accumulated, the maximum over the available prefix is used.
inline std::vector<double> rolling_max(std::span<const double> series, std::size_t window_samples) {
    if (series.empty()) throw_invalid("rolling_max: empty series");
    if (window_samples == 0) throw_invalid("rolling_max: window must be >= 1 sample");

    struct Entry {
        std::size_t index;
        double value;
    };
    std::deque<Entry> dq;
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        while (!dq.empty() && dq.back().value <= series[i]) dq.pop_back();
        dq.push_back({i, series[i]});
        if (dq.front().index + window_samples <= i) dq.pop_front();
        out[i] = dq.front().value;
    }
    return out;
}

}  // namespace flexhome::metrics
