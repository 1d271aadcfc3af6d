#include "flexhome/sim/weather.hpp"

#include <cmath>

#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/rng.hpp"
#include "flexhome/common/strconv.hpp"

namespace flexhome::sim {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 6.283185307179586;

// Cool-and-dry climate: cold winters, hot summers, strong diurnal swing.
constexpr double kAnnualMeanC = 8.0;
constexpr double kAnnualAmpC = 15.0;
constexpr double kDiurnalAmpC = 6.0;
constexpr double kColdestDay = 15.0;    // mid January
constexpr double kWarmestDay = 172.0;   // late June (solar / day length peak)

}  // namespace

std::vector<WeatherSample> synth_weather(int days, std::uint64_t seed) {
    if (days <= 0) throw_invalid("synth_weather: days must be > 0");
    const int n = days * kStepsPerDay;
    std::vector<WeatherSample> out;
    out.reserve(static_cast<std::size_t>(n));

    Rng noise_rng(mix_seed(seed, "weather/ar1"));
    // AR(1) temperature noise, stationary std ~1.5 degC, slow decorrelation.
    const double phi = 0.995;
    const double sigma = 1.5 * std::sqrt(1.0 - phi * phi);
    double ar = 0.0;

    for (int i = 0; i < n; ++i) {
        const std::int64_t t_min = static_cast<std::int64_t>(i) * kStepMinutes;
        const double day = static_cast<double>(t_min) / 1440.0;
        const double hour = static_cast<double>(t_min % 1440) / 60.0;
        const std::int64_t day_idx = t_min / 1440;

        const double annual = kAnnualMeanC - kAnnualAmpC * std::cos(kTwoPi * (day - kColdestDay) / 365.0);
        const double diurnal = -kDiurnalAmpC * std::cos(kTwoPi * (hour - 14.0) / 24.0);
        ar = phi * ar + sigma * noise_rng.gaussian();

        // Per-day clearness in [0.55, 1]; cloudier days also run slightly cool.
        Rng day_rng(mix_seed(seed, "weather/day", static_cast<std::uint64_t>(day_idx)));
        const double clearness = 0.55 + 0.45 * day_rng.uniform01();

        const double day_len = 12.0 + 3.5 * std::cos(kTwoPi * (day - kWarmestDay) / 365.0);
        const double sunrise = 12.0 - day_len / 2.0;
        const double peak = 600.0 + 350.0 * std::cos(kTwoPi * (day - kWarmestDay) / 365.0);
        double solar = 0.0;
        if (hour > sunrise && hour < sunrise + day_len) {
            solar = clearness * peak * std::sin(kPi * (hour - sunrise) / day_len);
            if (solar < 0) solar = 0;
        }

        const double t_out = annual + diurnal + ar - 1.5 * (1.0 - clearness);
        out.push_back({t_min, t_out, solar});
    }
    return out;
}

void write_weather_csv(const std::string& path, std::span<const WeatherSample> samples) {
    CsvWriter w(path);
    w.header({"timestamp_min", "t_out_c", "solar_wm2"});
    for (const auto& s : samples) {
        w.field(s.timestamp_min);
        w.field(s.t_out_c);
        w.field(s.solar_wm2);
        w.end_row();
    }
    w.close();
}

std::vector<WeatherSample> load_weather_csv(const std::string& path) {
    CsvTable t = read_csv(path, {"timestamp_min", "t_out_c", "solar_wm2"});
    std::vector<WeatherSample> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        WeatherSample s;
        s.timestamp_min = csv_i64(t, r, 0, path);
        s.t_out_c = csv_double(t, r, 1, path);
        s.solar_wm2 = csv_double(t, r, 2, path);
        if (s.solar_wm2 < 0)
            throw_io(path + ":" + format_u64(r + 2) + ": negative solar irradiance");
        if (!out.empty()) {
            const std::int64_t prev = out.back().timestamp_min;
            if (s.timestamp_min != prev + kStepMinutes)
                throw_io(path + ":" + format_u64(r + 2) + ": timestamps must advance by " +
                         format_i64(kStepMinutes) + " min (got " + format_i64(prev) + " -> " +
                         format_i64(s.timestamp_min) + ")");
        }
        out.push_back(s);
    }
    if (out.empty()) throw_io(path + ": no weather samples");
    return out;
}

void check_weather_coverage(std::span<const WeatherSample> samples, std::int64_t start_min,
                            std::int64_t duration_min) {
    if (samples.empty()) throw_invalid("weather series is empty");
    const std::int64_t first = samples.front().timestamp_min;
    const std::int64_t last = samples.back().timestamp_min;
    const std::int64_t need_last = start_min + duration_min - kStepMinutes;
    if (first > start_min || last < need_last) {
        throw_invalid("weather gap: need coverage [" + format_i64(start_min) + ", " +
                      format_i64(start_min + duration_min) + ") min, have [" + format_i64(first) + ", " +
                      format_i64(last + kStepMinutes) + ")");
    }
}

}  // namespace flexhome::sim
