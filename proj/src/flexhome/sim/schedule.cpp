#include "flexhome/sim/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/rng.hpp"
#include "flexhome/common/strconv.hpp"
#include "flexhome/sim/house.hpp"

namespace flexhome::sim {

namespace {

bool is_weekend(std::int64_t day_index) {
    // day 0 is a Monday
    const int dow = static_cast<int>(day_index % 7);
    return dow == 5 || dow == 6;
}

void validate_draws(const std::vector<DrawEvent>& draws, const char* which) {
    std::vector<DrawEvent> sorted = draws;
    std::sort(sorted.begin(), sorted.end(),
              [](const DrawEvent& a, const DrawEvent& b) { return a.start_min_of_day < b.start_min_of_day; });
    int prev_end = -1;
    for (const auto& d : sorted) {
        if (d.start_min_of_day < 0 || d.start_min_of_day >= 1440)
            throw_config(std::string(which) + ": draw start must be in [0, 1440)");
        if (d.duration_min <= 0) throw_config(std::string(which) + ": draw duration must be > 0");
        if (d.flow_lpm < 0) throw_config(std::string(which) + ": draw flow must be >= 0");
        if (d.start_min_of_day < prev_end)
            throw_config(std::string(which) + ": draws must not overlap within a day");
        prev_end = d.start_min_of_day + d.duration_min;
    }
}

}  // namespace

void ScheduleSpec::validate() const {
    validate_draws(weekday_draws, "weekday_draws");
    validate_draws(weekend_draws, "weekend_draws");
    if (base_profile.empty()) throw_config("base_profile must have at least one point");
    int prev = -1;
    for (const auto& p : base_profile) {
        if (p.min_of_day < 0 || p.min_of_day >= 1440) throw_config("base_profile minute out of range");
        if (p.min_of_day <= prev) throw_config("base_profile minutes must be strictly increasing");
        if (p.kw < 0) throw_config("base_profile power must be >= 0");
        prev = p.min_of_day;
    }
    if (base_profile.front().min_of_day != 0) throw_config("base_profile must start at minute 0");
    if (fridge_on_kw < 0 || fridge_on_min < 0 || fridge_period_min < 0)
        throw_config("fridge parameters must be >= 0");
    if (fridge_on_kw > 0 && (fridge_on_min <= 0 || fridge_period_min < fridge_on_min))
        throw_config("fridge block needs 0 < on_min <= period_min");
    if (base_jitter_frac < 0 || base_jitter_frac >= 1) throw_config("base_jitter_frac must be in [0, 1)");
    if (draw_start_jitter_min < 0) throw_config("draw_start_jitter_min must be >= 0");
    if (draw_flow_jitter_frac < 0 || draw_flow_jitter_frac >= 1)
        throw_config("draw_flow_jitter_frac must be in [0, 1)");
}

double ScheduleSpec::draw_lpm_at(std::int64_t timestamp_min, std::uint64_t sim_seed) const {
    const std::int64_t day = timestamp_min / 1440;
    const int mod = static_cast<int>(timestamp_min % 1440);
    const auto& draws = is_weekend(day) ? weekend_draws : weekday_draws;
    const std::uint64_t base = sim_seed ^ seed;

    double total = 0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const DrawEvent& d = draws[i];
        Rng ev(mix_seed(base, "schedule/draw", static_cast<std::uint64_t>(day) * 251 + i));
        const int start =
            d.start_min_of_day + static_cast<int>(std::round(draw_start_jitter_min * ev.uniform_sym()));
        const double flow = d.flow_lpm * (1.0 + draw_flow_jitter_frac * ev.uniform_sym());
        if (mod >= start && mod < start + d.duration_min) total += std::max(0.0, flow);
    }
    return total;
}

double ScheduleSpec::base_kw_at(std::int64_t timestamp_min, std::uint64_t sim_seed) const {
    const int mod = static_cast<int>(timestamp_min % 1440);

    // step profile: last point at or before `mod`
    double profile_kw = base_profile.front().kw;
    for (const auto& p : base_profile) {
        if (p.min_of_day <= mod) profile_kw = p.kw;
        else break;
    }

    Rng step_rng(mix_seed(sim_seed ^ seed, "schedule/base", static_cast<std::uint64_t>(timestamp_min)));
    double kw = profile_kw * (1.0 + base_jitter_frac * step_rng.uniform_sym());

    if (fridge_on_kw > 0 && fridge_period_min > 0) {
        const int phase = static_cast<int>(timestamp_min % fridge_period_min);
        if (phase < fridge_on_min) kw += fridge_on_kw;
    }
    return quantize_kw(std::max(0.0, kw));
}

namespace {

std::vector<DrawEvent> parse_draws(const Config& cfg, const std::string& key) {
    std::vector<DrawEvent> out;
    for (const auto& item : cfg.get_list(key)) {
        auto parts = split(item, ':');
        std::int64_t start = 0, dur = 0;
        double flow = 0;
        if (parts.size() != 3 || !parse_i64(parts[0], start) || !parse_i64(parts[1], dur) ||
            !parse_double(parts[2], flow))
            throw_config("config key `" + key + "`: expected `start_min:duration_min:flow_lpm`, got `" +
                         item + "`");
        out.push_back({static_cast<int>(start), static_cast<int>(dur), flow});
    }
    return out;
}

std::string draws_to_string(const std::vector<DrawEvent>& draws) {
    std::string s;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (i) s += ", ";
        s += format_i64(draws[i].start_min_of_day) + ":" + format_i64(draws[i].duration_min) + ":" +
             format_double(draws[i].flow_lpm);
    }
    return s;
}

}  // namespace

ScheduleSpec schedule_from_config(const Config& cfg) {
    ScheduleSpec s;
    s.weekday_draws = parse_draws(cfg, "schedule.weekday_draws");
    s.weekend_draws = parse_draws(cfg, "schedule.weekend_draws");
    for (const auto& item : cfg.get_list("schedule.base_profile")) {
        auto parts = split(item, ':');
        std::int64_t m = 0;
        double kw = 0;
        if (parts.size() != 2 || !parse_i64(parts[0], m) || !parse_double(parts[1], kw))
            throw_config("config key `schedule.base_profile`: expected `min_of_day:kw`, got `" + item + "`");
        s.base_profile.push_back({static_cast<int>(m), kw});
    }
    s.fridge_on_kw = cfg.require_double("schedule.fridge_on_kw");
    s.fridge_on_min = static_cast<int>(cfg.require_i64("schedule.fridge_on_min"));
    s.fridge_period_min = static_cast<int>(cfg.require_i64("schedule.fridge_period_min"));
    s.base_jitter_frac = cfg.get_double("schedule.base_jitter_frac", 0.0);
    s.draw_start_jitter_min = cfg.get_double("schedule.draw_start_jitter_min", 0.0);
    s.draw_flow_jitter_frac = cfg.get_double("schedule.draw_flow_jitter_frac", 0.0);
    s.seed = cfg.get_u64("schedule.seed", 0);
    s.validate();
    return s;
}

void schedule_to_config(const ScheduleSpec& s, Config& cfg) {
    cfg.set("schedule.weekday_draws", draws_to_string(s.weekday_draws));
    cfg.set("schedule.weekend_draws", draws_to_string(s.weekend_draws));
    std::string prof;
    for (std::size_t i = 0; i < s.base_profile.size(); ++i) {
        if (i) prof += ", ";
        prof += format_i64(s.base_profile[i].min_of_day) + ":" + format_double(s.base_profile[i].kw);
    }
    cfg.set("schedule.base_profile", prof);
    cfg.set("schedule.fridge_on_kw", format_double(s.fridge_on_kw));
    cfg.set("schedule.fridge_on_min", format_i64(s.fridge_on_min));
    cfg.set("schedule.fridge_period_min", format_i64(s.fridge_period_min));
    cfg.set("schedule.base_jitter_frac", format_double(s.base_jitter_frac));
    cfg.set("schedule.draw_start_jitter_min", format_double(s.draw_start_jitter_min));
    cfg.set("schedule.draw_flow_jitter_frac", format_double(s.draw_flow_jitter_frac));
    cfg.set("schedule.seed", format_u64(s.seed));
}

}  // namespace flexhome::sim
