#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flexhome/sim/simulate.hpp"

namespace flexhome::metrics {

inline constexpr int kDefaultDurationCapMin = 480;

enum class Device : int { HvacHeat = 0, HvacCool = 1, WaterHeater = 2 };

const char* device_name(Device d);
Device device_from_name(const std::string& s);

struct FlexTier {
    double shed_kw = 0;      // cumulative reducible power at this tier
    int duration_min = 0;    // maintainable for at least this long
};

struct FlexStaircase {
    std::int64_t timestamp_min = 0;
    std::vector<FlexTier> tiers;  // duration ascending, shed strictly descending
};

// Minutes until the comfort/safety limit binds with `device` forced off and
// every other appliance still on its controller. Counts in 3-minute steps;
// a limit already touched at entry is 0; never exceeds cap_min. Limits:
//   HvacHeat    t_air <= heat_setpoint - halfwidth
//   HvacCool    t_air >= cool_setpoint + halfwidth
//   WaterHeater t_tank <= tank_setpoint - halfwidth
// weather_future[0] is "now" and the series must cover cap_min.
int maintainable_duration(const sim::HouseState& state, Device device, const sim::HouseParams& params,
                          std::span<const sim::WeatherSample> weather_future, int cap_min);

struct StairEntry {
    Device device = Device::HvacHeat;
    double shed_kw = 0;
    int duration_min = 0;
};

// Drops zero-power entries, sorts by duration (shortest first), merges equal
// durations by summing their powers, then takes the reverse cumulative sum:
// tier i's shed is the total power of every entry lasting at least as long.
FlexStaircase build_staircase(std::int64_t timestamp_min, std::span<const StairEntry> entries);

// Per-timestep per-device intermediates, also used as forecasting labels.
struct DeviceFlexSeries {
    std::vector<std::int64_t> timestamp_min;
    std::vector<double> rated_hvac_kw;
    std::vector<double> rated_wh_kw;
    std::vector<int> heat_duration_min;
    std::vector<int> cool_duration_min;
    std::vector<int> wh_duration_min;
};

struct StaircaseSeries {
    std::vector<FlexStaircase> staircases;
    DeviceFlexSeries devices;
};

// Full pipeline of rated powers, forced-off durations and tier construction
// at every timestep. The staircase at t pairs the water heater with the HVAC
// direction that is currently relevant: the active mode if the HVAC is
// running, otherwise heating when the outdoor temperature sits below the
// setpoint midpoint and cooling above it. Weather must cover the trace span
// plus cap_min for the trailing counterfactuals.
StaircaseSeries staircase_series(std::span<const sim::TraceFrame> trace, const sim::HouseParams& params,
                                 std::span<const sim::WeatherSample> weather, int cap_min = kDefaultDurationCapMin,
                                 std::int64_t rated_window_min = 10080);

// Long form CSV: timestamp_min,tier_index,shed_kw,duration_min
void write_staircase_csv(const std::string& path, std::span<const FlexStaircase> staircases);

// Long form CSV: timestamp_min,device,rated_kw,duration_min
void write_durations_csv(const std::string& path, const DeviceFlexSeries& s);
DeviceFlexSeries load_durations_csv(const std::string& path);

}  // namespace flexhome::metrics
