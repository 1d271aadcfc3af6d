#include "flexhome/metrics/staircase.hpp"

#include <algorithm>

#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"
#include "flexhome/metrics/bounds.hpp"

namespace flexhome::metrics {

const char* device_name(Device d) {
    switch (d) {
        case Device::HvacHeat: return "HEAT";
        case Device::HvacCool: return "COOL";
        case Device::WaterHeater: return "WH";
    }
    return "WH";
}

Device device_from_name(const std::string& s) {
    if (s == "HEAT") return Device::HvacHeat;
    if (s == "COOL") return Device::HvacCool;
    if (s == "WH") return Device::WaterHeater;
    throw_invalid("unknown device `" + s + "`");
}

namespace {

bool limit_binds(const sim::HouseState& state, Device device, const sim::HouseParams& p) {
    switch (device) {
        case Device::HvacHeat:
            return state.t_air_c <= p.heat_setpoint_c - p.deadband_halfwidth_c;
        case Device::HvacCool:
            return state.t_air_c >= p.cool_setpoint_c + p.deadband_halfwidth_c;
        case Device::WaterHeater:
            return state.t_tank_c <= p.tank_setpoint_c - p.tank_deadband_halfwidth_c;
    }
    return false;
}

}  // namespace

int maintainable_duration(const sim::HouseState& initial, Device device, const sim::HouseParams& p,
                          std::span<const sim::WeatherSample> weather_future, int cap_min) {
    if (cap_min <= 0) throw_invalid("maintainable_duration: cap_min must be > 0");
    const int cap_steps = cap_min / sim::kStepMinutes;
    if (static_cast<std::size_t>(cap_steps) > weather_future.size())
        throw_invalid("maintainable_duration: weather_future shorter than cap (" +
                      format_u64(weather_future.size()) + " samples for " + format_i64(cap_min) + " min)");

    sim::HouseState state = initial;
    const bool hvac_forced_off = device == Device::HvacHeat || device == Device::HvacCool;
    if (hvac_forced_off) state.hvac_mode = sim::HvacMode::Off;
    if (device == Device::WaterHeater) state.wh_on = false;

    for (int k = 0; k < cap_steps; ++k) {
        if (limit_binds(state, device, p)) return k * sim::kStepMinutes;

        const sim::WeatherSample& w = weather_future[static_cast<std::size_t>(k)];
        double hvac_thermal_w = 0;
        double wh_thermal_w = 0;
        if (!hvac_forced_off) {
            const sim::HvacDecision hvac = sim::hvac_controller(state, p, w.t_out_c, sim::SeasonMode::Auto);
            state.hvac_mode = hvac.mode;
            hvac_thermal_w = hvac.thermal_w;
        }
        if (device != Device::WaterHeater) {
            const sim::WhDecision wh = sim::wh_controller(state, p);
            state.wh_on = wh.on;
            wh_thermal_w = wh.thermal_w;
        }
        state = sim::step_thermal(state, p, w, hvac_thermal_w, wh_thermal_w, /*draw_lpm=*/0.0,
                                  sim::kStepSeconds);
    }
    return cap_steps * sim::kStepMinutes;
}

FlexStaircase build_staircase(std::int64_t timestamp_min, std::span<const StairEntry> entries) {
    FlexStaircase s;
    s.timestamp_min = timestamp_min;

    std::vector<StairEntry> kept;
    for (const auto& e : entries) {
        if (e.shed_kw < 0) throw_invalid("build_staircase: shed power must be >= 0");
        if (e.duration_min < 0) throw_invalid("build_staircase: duration must be >= 0");
        if (e.shed_kw > 0) kept.push_back(e);
    }
    std::sort(kept.begin(), kept.end(),
              [](const StairEntry& a, const StairEntry& b) { return a.duration_min < b.duration_min; });

    // merge equal durations, then reverse cumulative sum over the tail
    std::vector<FlexTier> merged;
    for (const auto& e : kept) {
        if (!merged.empty() && merged.back().duration_min == e.duration_min)
            merged.back().shed_kw += e.shed_kw;
        else
            merged.push_back({e.shed_kw, e.duration_min});
    }
    double tail = 0;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
        tail += it->shed_kw;
        it->shed_kw = tail;
    }
    s.tiers = std::move(merged);
    return s;
}

StaircaseSeries staircase_series(std::span<const sim::TraceFrame> trace, const sim::HouseParams& params,
                                 std::span<const sim::WeatherSample> weather, int cap_min,
                                 std::int64_t rated_window_min) {
    if (trace.empty()) throw_invalid("staircase_series: empty trace");
    params.validate();
    const std::int64_t t0 = trace.front().timestamp_min;
    const std::int64_t span_min = trace.back().timestamp_min - t0 + sim::kStepMinutes;
    sim::check_weather_coverage(weather, t0, span_min + cap_min);
    const std::size_t w_offset = static_cast<std::size_t>((t0 - weather.front().timestamp_min) / sim::kStepMinutes);

    const std::size_t n = trace.size();
    std::vector<double> hvac(n), wh(n);
    for (std::size_t i = 0; i < n; ++i) {
        hvac[i] = trace[i].hvac_kw;
        wh[i] = trace[i].wh_kw;
    }
    const std::vector<double> rated_hvac = rated_power(hvac, rated_window_min);
    const std::vector<double> rated_wh = rated_power(wh, rated_window_min);

    StaircaseSeries out;
    out.staircases.reserve(n);
    auto& dev = out.devices;
    dev.timestamp_min.resize(n);
    dev.rated_hvac_kw = rated_hvac;
    dev.rated_wh_kw = rated_wh;
    dev.heat_duration_min.resize(n);
    dev.cool_duration_min.resize(n);
    dev.wh_duration_min.resize(n);

    const double season_midpoint_c = (params.heat_setpoint_c + params.cool_setpoint_c) / 2.0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = trace[i];
        sim::HouseState state;
        state.t_air_c = f.t_air_c;
        state.t_mass_c = f.t_air_c;  // trace stores no mass node; air temp is the closest proxy
        state.t_tank_c = f.t_tank_c;
        state.hvac_mode = f.hvac_mode;
        state.wh_on = f.wh_on;

        const auto weather_future = weather.subspan(w_offset + i);
        dev.timestamp_min[i] = f.timestamp_min;
        dev.heat_duration_min[i] = maintainable_duration(state, Device::HvacHeat, params, weather_future, cap_min);
        dev.cool_duration_min[i] = maintainable_duration(state, Device::HvacCool, params, weather_future, cap_min);
        dev.wh_duration_min[i] = maintainable_duration(state, Device::WaterHeater, params, weather_future, cap_min);

        Device hvac_dir;
        if (f.hvac_mode == sim::HvacMode::Heat) hvac_dir = Device::HvacHeat;
        else if (f.hvac_mode == sim::HvacMode::Cool) hvac_dir = Device::HvacCool;
        else hvac_dir = f.t_out_c < season_midpoint_c ? Device::HvacHeat : Device::HvacCool;

        const int hvac_dur = hvac_dir == Device::HvacHeat ? dev.heat_duration_min[i] : dev.cool_duration_min[i];
        const StairEntry entries[2] = {
            {hvac_dir, rated_hvac[i], hvac_dur},
            {Device::WaterHeater, rated_wh[i], dev.wh_duration_min[i]},
        };
        out.staircases.push_back(build_staircase(f.timestamp_min, entries));
    }
    return out;
}

void write_staircase_csv(const std::string& path, std::span<const FlexStaircase> staircases) {
    CsvWriter w(path);
    w.header({"timestamp_min", "tier_index", "shed_kw", "duration_min"});
    for (const auto& s : staircases) {
        for (std::size_t i = 0; i < s.tiers.size(); ++i) {
            w.field(s.timestamp_min);
            w.field(static_cast<std::int64_t>(i));
            w.field(s.tiers[i].shed_kw);
            w.field(static_cast<std::int64_t>(s.tiers[i].duration_min));
            w.end_row();
        }
    }
    w.close();
}

void write_durations_csv(const std::string& path, const DeviceFlexSeries& s) {
    CsvWriter w(path);
    w.header({"timestamp_min", "device", "rated_kw", "duration_min"});
    for (std::size_t i = 0; i < s.timestamp_min.size(); ++i) {
        const struct {
            Device d;
            double rated;
            int dur;
        } rows[3] = {
            {Device::HvacHeat, s.rated_hvac_kw[i], s.heat_duration_min[i]},
            {Device::HvacCool, s.rated_hvac_kw[i], s.cool_duration_min[i]},
            {Device::WaterHeater, s.rated_wh_kw[i], s.wh_duration_min[i]},
        };
        for (const auto& r : rows) {
            w.field(s.timestamp_min[i]);
            w.field(std::string(device_name(r.d)));
            w.field(r.rated);
            w.field(static_cast<std::int64_t>(r.dur));
            w.end_row();
        }
    }
    w.close();
}

DeviceFlexSeries load_durations_csv(const std::string& path) {
    CsvTable t = read_csv(path, {"timestamp_min", "device", "rated_kw", "duration_min"});
    if (t.rows.size() % 3 != 0) throw_io(path + ": expected three device rows per timestamp");
    DeviceFlexSeries s;
    const std::size_t n = t.rows.size() / 3;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r0 = 3 * i;
        const std::int64_t ts = csv_i64(t, r0, 0, path);
        s.timestamp_min.push_back(ts);
        double rated_hvac = 0, rated_wh = 0;
        int heat_d = 0, cool_d = 0, wh_d = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            const std::size_t r = r0 + j;
            if (csv_i64(t, r, 0, path) != ts)
                throw_io(path + ":" + format_u64(r + 2) + ": device rows for a timestamp must be adjacent");
            const Device d = device_from_name(t.rows[r][1]);
            const double rated = csv_double(t, r, 2, path);
            const int dur = static_cast<int>(csv_i64(t, r, 3, path));
            switch (d) {
                case Device::HvacHeat: rated_hvac = rated; heat_d = dur; break;
                case Device::HvacCool: rated_hvac = rated; cool_d = dur; break;
                case Device::WaterHeater: rated_wh = rated; wh_d = dur; break;
            }
        }
        s.rated_hvac_kw.push_back(rated_hvac);
        s.rated_wh_kw.push_back(rated_wh);
        s.heat_duration_min.push_back(heat_d);
        s.cool_duration_min.push_back(cool_d);
        s.wh_duration_min.push_back(wh_d);
    }
    if (s.timestamp_min.empty()) throw_io(path + ": no duration rows");
    return s;
}

}  // namespace flexhome::metrics
