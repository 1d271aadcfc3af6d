#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flexhome/common/config.hpp"
#include "flexhome/sim/house.hpp"
#include "flexhome/sim/schedule.hpp"
#include "flexhome/sim/weather.hpp"

namespace flexhome::sim {

struct TraceFrame {
    std::int64_t timestamp_min = 0;
    double net_kw = 0;   // hvac + wh + base, exact on the power grid
    double hvac_kw = 0;
    double wh_kw = 0;
    double base_kw = 0;
    double t_air_c = 0;
    double t_tank_c = 0;
    double t_out_c = 0;
    HvacMode hvac_mode = HvacMode::Off;
    bool wh_on = false;
};

struct SimOptions {
    SeasonMode season = SeasonMode::Auto;
    // Auto mode: after a heat<->cool changeover the opposite direction stays
    // locked out for this long, so shoulder-season days cannot chatter.
    std::int64_t changeover_lockout_min = 720;
    HouseState initial;
};

// Deterministic 3-minute discrete-time simulation. Weather must cover
// [0, duration_min). Frames report the state at t and the device powers that
// apply over [t, t+3).
std::vector<TraceFrame> simulate(const HouseParams& params, const ScheduleSpec& schedule,
                                 std::span<const WeatherSample> weather, std::int64_t duration_min,
                                 std::uint64_t seed, const SimOptions& opts = {});

// Trace CSV: timestamp_min,net_kw,hvac_kw,wh_kw,base_kw,t_air_c,t_tank_c,
// t_out_c,hvac_mode,wh_on. hvac_mode in {OFF,HEAT,COOL}, wh_on in {0,1}.
void write_trace_csv(const std::string& path, std::span<const TraceFrame> trace);
std::vector<TraceFrame> load_trace_csv(const std::string& path);

HouseParams house_from_config(const Config& cfg);
void house_to_config(const HouseParams& p, Config& cfg);

}  // namespace flexhome::sim
