#pragma once

#include <cstdint>
#include <vector>

#include "flexhome/common/config.hpp"

namespace flexhome::sim {

struct DrawEvent {
    int start_min_of_day = 0;
    int duration_min = 0;
    double flow_lpm = 0;
};

struct ProfilePoint {
    int min_of_day = 0;  // step function: value holds until the next point
    double kw = 0;
};

// Occupant-driven load description: hot-water draws (weekday/weekend), a
// base-load step profile with a cycling refrigerator block, and jitter
// amplitudes. Jitter is resolved statelessly from (seed, day, index) so a
// frame's loads never depend on evaluation order.
struct ScheduleSpec {
    std::vector<DrawEvent> weekday_draws;
    std::vector<DrawEvent> weekend_draws;
    std::vector<ProfilePoint> base_profile;
    double fridge_on_kw = 0;
    int fridge_on_min = 0;
    int fridge_period_min = 0;
    double base_jitter_frac = 0;   // multiplicative, on the profile part
    double draw_start_jitter_min = 0;
    double draw_flow_jitter_frac = 0;
    std::uint64_t seed = 0;

    void validate() const;

    // Total draw flow (L/min) at an absolute minute, day-of-week aware,
    // with jittered event starts. `sim_seed` is folded into the jitter.
    double draw_lpm_at(std::int64_t timestamp_min, std::uint64_t sim_seed) const;

    // Base (non-flexible) electric load in kW at an absolute minute,
    // already quantized to the power grid.
    double base_kw_at(std::int64_t timestamp_min, std::uint64_t sim_seed) const;
};

// Keys: schedule.weekday_draws / schedule.weekend_draws as
// `start_min:duration_min:flow_lpm` tuples, schedule.base_profile as
// `min_of_day:kw` pairs, plus scalar fridge/jitter/seed keys.
ScheduleSpec schedule_from_config(const Config& cfg);
void schedule_to_config(const ScheduleSpec& s, Config& cfg);

}  // namespace flexhome::sim
