#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flexhome::sim {

inline constexpr int kStepMinutes = 3;
inline constexpr double kStepSeconds = 180.0;
inline constexpr int kStepsPerDay = 1440 / kStepMinutes;

struct WeatherSample {
    std::int64_t timestamp_min = 0;  // minutes since simulation start
    double t_out_c = 0;
    double solar_wm2 = 0;
};

// Synthetic driver: annual + diurnal sinusoids with AR(1) noise on
// temperature, clamped half-sine solar with seasonal day length and a per-day
// clearness factor. Deterministic for a given seed. Day 0 is a Monday,
// January 1st, midnight.
std::vector<WeatherSample> synth_weather(int days, std::uint64_t seed);

// CSV: timestamp_min,t_out_c,solar_wm2. The loader enforces the 3-minute
// grid and reports malformed rows with their line number.
std::vector<WeatherSample> load_weather_csv(const std::string& path);
void write_weather_csv(const std::string& path, std::span<const WeatherSample> samples);

// Throws unless samples start at `start_min` and cover at least
// `duration_min` minutes on the 3-minute grid; the message names the first
// missing interval.
void check_weather_coverage(std::span<const WeatherSample> samples, std::int64_t start_min,
                            std::int64_t duration_min);

}  // namespace flexhome::sim
