#include "flexhome/data/features.hpp"

#include <cmath>

#include "flexhome/common/errors.hpp"

namespace flexhome::data {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

const char* task_name(Task t) {
    switch (t) {
        case Task::Bounds: return "bounds";
        case Task::WhDuration: return "wh_duration";
        case Task::HeatDuration: return "heat_duration";
        case Task::CoolDuration: return "cool_duration";
    }
    return "bounds";
}

Task task_from_name(const std::string& s) {
    if (s == "bounds") return Task::Bounds;
    if (s == "wh_duration") return Task::WhDuration;
    if (s == "heat_duration") return Task::HeatDuration;
    if (s == "cool_duration") return Task::CoolDuration;
    throw_invalid("unknown task `" + s + "`");
}

std::vector<std::string> feature_names(Task t) {
    switch (t) {
        case Task::Bounds:
            return {"net_kw", "t_out_c", "t_air_c", "t_tank_c", "hvac_off", "hvac_heat",
                    "hvac_cool", "wh_on", "tod_sin", "tod_cos"};
        case Task::WhDuration:
            return {"t_out_c", "tod_sin", "tod_cos", "t_tank_c", "wh_on"};
        case Task::HeatDuration:
            return {"t_out_c", "tod_sin", "tod_cos", "t_air_c", "hvac_heating"};
        case Task::CoolDuration:
            return {"t_out_c", "tod_sin", "tod_cos", "t_air_c", "hvac_cooling"};
    }
    return {};
}

std::vector<std::string> label_names(Task t) {
    if (t == Task::Bounds) return {"lower_kw", "upper_kw"};
    return {"duration_min"};
}

std::vector<bool> binary_feature_mask(Task t) {
    if (t == Task::Bounds)
        return {false, false, false, false, true, true, true, true, false, false};
    return {false, false, false, false, true};
}

ml::Tensor build_features(std::span<const sim::TraceFrame> trace, Task t) {
    if (trace.empty()) throw_invalid("build_features: empty trace");
    const std::size_t d = feature_names(t).size();
    ml::Tensor m({trace.size(), d});

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& f = trace[i];
        const double mod = static_cast<double>(f.timestamp_min % 1440);
        const double tod_sin = std::sin(kTwoPi * mod / 1440.0);
        const double tod_cos = std::cos(kTwoPi * mod / 1440.0);

        switch (t) {
            case Task::Bounds:
                m.at2(i, 0) = f.net_kw;
                m.at2(i, 1) = f.t_out_c;
                m.at2(i, 2) = f.t_air_c;
                m.at2(i, 3) = f.t_tank_c;
                m.at2(i, 4) = f.hvac_mode == sim::HvacMode::Off ? 1.0 : 0.0;
                m.at2(i, 5) = f.hvac_mode == sim::HvacMode::Heat ? 1.0 : 0.0;
                m.at2(i, 6) = f.hvac_mode == sim::HvacMode::Cool ? 1.0 : 0.0;
                m.at2(i, 7) = f.wh_on ? 1.0 : 0.0;
                m.at2(i, 8) = tod_sin;
                m.at2(i, 9) = tod_cos;
                break;
            case Task::WhDuration:
                m.at2(i, 0) = f.t_out_c;
                m.at2(i, 1) = tod_sin;
                m.at2(i, 2) = tod_cos;
                m.at2(i, 3) = f.t_tank_c;
                m.at2(i, 4) = f.wh_on ? 1.0 : 0.0;
                break;
            case Task::HeatDuration:
                m.at2(i, 0) = f.t_out_c;
                m.at2(i, 1) = tod_sin;
                m.at2(i, 2) = tod_cos;
                m.at2(i, 3) = f.t_air_c;
                m.at2(i, 4) = f.hvac_mode == sim::HvacMode::Heat ? 1.0 : 0.0;
                break;
            case Task::CoolDuration:
                m.at2(i, 0) = f.t_out_c;
                m.at2(i, 1) = tod_sin;
                m.at2(i, 2) = tod_cos;
                m.at2(i, 3) = f.t_air_c;
                m.at2(i, 4) = f.hvac_mode == sim::HvacMode::Cool ? 1.0 : 0.0;
                break;
        }
    }
    return m;
}

ml::Tensor build_labels(Task t, const metrics::PowerBounds& bounds, const metrics::DeviceFlexSeries& durations) {
    if (t == Task::Bounds) {
        const std::size_t n = bounds.timestamp_min.size();
        if (n == 0) throw_invalid("build_labels: empty bounds");
        ml::Tensor m({n, 2});
        for (std::size_t i = 0; i < n; ++i) {
            m.at2(i, 0) = bounds.lower_kw[i];
            m.at2(i, 1) = bounds.upper_kw[i];
        }
        return m;
    }

    const std::size_t n = durations.timestamp_min.size();
    if (n == 0) throw_invalid("build_labels: empty durations");
    const std::vector<int>* src = nullptr;
    switch (t) {
        case Task::WhDuration: src = &durations.wh_duration_min; break;
        case Task::HeatDuration: src = &durations.heat_duration_min; break;
        case Task::CoolDuration: src = &durations.cool_duration_min; break;
        case Task::Bounds: break;
    }
    ml::Tensor m({n, 1});
    for (std::size_t i = 0; i < n; ++i) m.at2(i, 0) = static_cast<double>((*src)[i]);
    return m;
}

}  // namespace flexhome::data
