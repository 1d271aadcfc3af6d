#pragma once

#include <span>
#include <string>
#include <vector>

#include "flexhome/metrics/bounds.hpp"
#include "flexhome/metrics/staircase.hpp"
#include "flexhome/ml/tensor.hpp"
#include "flexhome/sim/simulate.hpp"

namespace flexhome::data {

enum class Task : int { Bounds = 0, WhDuration = 1, HeatDuration = 2, CoolDuration = 3 };

const char* task_name(Task t);
Task task_from_name(const std::string& s);

// Fixed, ordered feature layout per task.
//   Bounds:       net_kw, t_out_c, t_air_c, t_tank_c,
//                 hvac_off, hvac_heat, hvac_cool (one-hot), wh_on,
//                 tod_sin, tod_cos
//   WhDuration:   t_out_c, tod_sin, tod_cos, t_tank_c, wh_on
//   Heat/Cool:    t_out_c, tod_sin, tod_cos, t_air_c, hvac_active
// where hvac_active is 1 while the HVAC runs in the task's direction and
// tod_* encode minute-of-day on the unit circle.
std::vector<std::string> feature_names(Task t);
std::vector<std::string> label_names(Task t);

// True for the 0/1 indicator columns (one-hot HVAC state, device-on flags),
// which are fed to the models as-is rather than z-scored.
std::vector<bool> binary_feature_mask(Task t);

// Rows align 1:1 with the trace frames.
ml::Tensor build_features(std::span<const sim::TraceFrame> trace, Task t);

// Bounds labels are the smoothed bounds (lower, upper); duration labels are
// the task device's maintainable duration in minutes. Inputs must align with
// the trace the features came from.
ml::Tensor build_labels(Task t, const metrics::PowerBounds& bounds, const metrics::DeviceFlexSeries& durations);

}  // namespace flexhome::data
