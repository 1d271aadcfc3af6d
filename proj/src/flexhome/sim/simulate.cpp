#include "flexhome/sim/simulate.hpp"

#include <cmath>

#include "flexhome/common/csv.hpp"
#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"

namespace flexhome::sim {

std::vector<TraceFrame> simulate(const HouseParams& params, const ScheduleSpec& schedule,
                                 std::span<const WeatherSample> weather, std::int64_t duration_min,
                                 std::uint64_t seed, const SimOptions& opts) {
    params.validate();
    schedule.validate();
    if (duration_min <= 0 || duration_min % kStepMinutes != 0)
        throw_invalid("simulate: duration_min must be a positive multiple of " + format_i64(kStepMinutes));
    check_weather_coverage(weather, 0, duration_min);
    if (weather.front().timestamp_min != 0)
        throw_invalid("simulate: weather must start at timestamp 0");

    const std::int64_t n_steps = duration_min / kStepMinutes;
    std::vector<TraceFrame> trace;
    trace.reserve(static_cast<std::size_t>(n_steps));

    HouseState state = opts.initial;
    // Changeover lockout bookkeeping: last minute each direction was active.
    std::int64_t last_heat_min = -1;
    std::int64_t last_cool_min = -1;

    for (std::int64_t k = 0; k < n_steps; ++k) {
        const std::int64_t t_min = k * kStepMinutes;
        const WeatherSample& w = weather[static_cast<std::size_t>(k)];

        HvacAllow allow;
        if (last_cool_min >= 0 && t_min - last_cool_min < opts.changeover_lockout_min)
            allow.heat = false;
        if (last_heat_min >= 0 && t_min - last_heat_min < opts.changeover_lockout_min)
            allow.cool = false;

        const HvacDecision hvac = hvac_controller(state, params, w.t_out_c, opts.season, allow);
        const WhDecision wh = wh_controller(state, params);
        const double draw_lpm = schedule.draw_lpm_at(t_min, seed);
        const double base_kw = schedule.base_kw_at(t_min, seed);

        TraceFrame f;
        f.timestamp_min = t_min;
        f.hvac_kw = hvac.electric_kw;
        f.wh_kw = wh.electric_kw;
        f.base_kw = base_kw;
        f.net_kw = f.hvac_kw + f.wh_kw + f.base_kw;
        f.t_air_c = state.t_air_c;
        f.t_tank_c = state.t_tank_c;
        f.t_out_c = w.t_out_c;
        f.hvac_mode = hvac.mode;
        f.wh_on = wh.on;
        trace.push_back(f);

        if (hvac.mode == HvacMode::Heat) last_heat_min = t_min;
        if (hvac.mode == HvacMode::Cool) last_cool_min = t_min;

        state.hvac_mode = hvac.mode;
        state.wh_on = wh.on;
        try {
            state = step_thermal(state, params, w, hvac.thermal_w, wh.thermal_w, draw_lpm, kStepSeconds);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::SimFault)
                throw_sim_fault(std::string(e.what()) + " at timestep " + format_i64(k));
            throw;
        }
    }
    return trace;
}

void write_trace_csv(const std::string& path, std::span<const TraceFrame> trace) {
    CsvWriter w(path);
    w.header({"timestamp_min", "net_kw", "hvac_kw", "wh_kw", "base_kw", "t_air_c", "t_tank_c", "t_out_c",
              "hvac_mode", "wh_on"});
    for (const auto& f : trace) {
        w.field(f.timestamp_min);
        w.field(f.net_kw);
        w.field(f.hvac_kw);
        w.field(f.wh_kw);
        w.field(f.base_kw);
        w.field(f.t_air_c);
        w.field(f.t_tank_c);
        w.field(f.t_out_c);
        w.field(std::string(hvac_mode_name(f.hvac_mode)));
        w.field(static_cast<std::int64_t>(f.wh_on ? 1 : 0));
        w.end_row();
    }
    w.close();
}

std::vector<TraceFrame> load_trace_csv(const std::string& path) {
    CsvTable t = read_csv(path, {"timestamp_min", "net_kw", "hvac_kw", "wh_kw", "base_kw", "t_air_c",
                                 "t_tank_c", "t_out_c", "hvac_mode", "wh_on"});
    std::vector<TraceFrame> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        TraceFrame f;
        f.timestamp_min = csv_i64(t, r, 0, path);
        f.net_kw = csv_double(t, r, 1, path);
        f.hvac_kw = csv_double(t, r, 2, path);
        f.wh_kw = csv_double(t, r, 3, path);
        f.base_kw = csv_double(t, r, 4, path);
        f.t_air_c = csv_double(t, r, 5, path);
        f.t_tank_c = csv_double(t, r, 6, path);
        f.t_out_c = csv_double(t, r, 7, path);
        f.hvac_mode = hvac_mode_from_name(t.rows[r][8]);
        const std::int64_t on = csv_i64(t, r, 9, path);
        if (on != 0 && on != 1) throw_io(path + ":" + format_u64(r + 2) + ": wh_on must be 0 or 1");
        f.wh_on = on == 1;
        if (f.net_kw < 0 || f.hvac_kw < 0 || f.wh_kw < 0 || f.base_kw < 0)
            throw_io(path + ":" + format_u64(r + 2) + ": negative power");
        if (f.net_kw != f.hvac_kw + f.wh_kw + f.base_kw)
            throw_io(path + ":" + format_u64(r + 2) + ": net_kw != hvac_kw + wh_kw + base_kw");
        if (!out.empty() && f.timestamp_min != out.back().timestamp_min + kStepMinutes)
            throw_io(path + ":" + format_u64(r + 2) + ": timestamps must advance by " +
                     format_i64(kStepMinutes) + " min");
        out.push_back(f);
    }
    if (out.empty()) throw_io(path + ": no trace frames");
    return out;
}

HouseParams house_from_config(const Config& cfg) {
    HouseParams p;
    p.c_air_j_per_k = cfg.require_double("house.c_air_j_per_k");
    p.c_mass_j_per_k = cfg.require_double("house.c_mass_j_per_k");
    p.r_out_k_per_w = cfg.require_double("house.r_out_k_per_w");
    p.r_mass_k_per_w = cfg.require_double("house.r_mass_k_per_w");
    p.solar_aperture_m2 = cfg.require_double("house.solar_aperture_m2");
    p.internal_gain_w = cfg.require_double("house.internal_gain_w");
    p.heat_setpoint_c = cfg.require_double("house.heat_setpoint_c");
    p.cool_setpoint_c = cfg.require_double("house.cool_setpoint_c");
    p.deadband_halfwidth_c = cfg.require_double("house.deadband_halfwidth_c");
    p.hvac_rated_electric_kw = cfg.require_double("house.hvac_rated_electric_kw");
    p.hvac_cop_heat_ref = cfg.require_double("house.hvac_cop_heat_ref");
    p.hvac_cop_cool_ref = cfg.require_double("house.hvac_cop_cool_ref");
    p.cop_derate_slope_per_c = cfg.require_double("house.cop_derate_slope_per_c");
    p.tank_volume_l = cfg.require_double("house.tank_volume_l");
    p.tank_c_j_per_k = cfg.require_double("house.tank_c_j_per_k");
    p.tank_r_k_per_w = cfg.require_double("house.tank_r_k_per_w");
    p.tank_setpoint_c = cfg.require_double("house.tank_setpoint_c");
    p.tank_deadband_halfwidth_c = cfg.require_double("house.tank_deadband_halfwidth_c");
    p.wh_rated_electric_kw = cfg.require_double("house.wh_rated_electric_kw");
    p.wh_cop = cfg.require_double("house.wh_cop");
    p.inlet_temp_c = cfg.require_double("house.inlet_temp_c");
    p.validate();
    return p;
}

void house_to_config(const HouseParams& p, Config& cfg) {
    cfg.set("house.c_air_j_per_k", format_double(p.c_air_j_per_k));
    cfg.set("house.c_mass_j_per_k", format_double(p.c_mass_j_per_k));
    cfg.set("house.r_out_k_per_w", format_double(p.r_out_k_per_w));
    cfg.set("house.r_mass_k_per_w", format_double(p.r_mass_k_per_w));
    cfg.set("house.solar_aperture_m2", format_double(p.solar_aperture_m2));
    cfg.set("house.internal_gain_w", format_double(p.internal_gain_w));
    cfg.set("house.heat_setpoint_c", format_double(p.heat_setpoint_c));
    cfg.set("house.cool_setpoint_c", format_double(p.cool_setpoint_c));
    cfg.set("house.deadband_halfwidth_c", format_double(p.deadband_halfwidth_c));
    cfg.set("house.hvac_rated_electric_kw", format_double(p.hvac_rated_electric_kw));
    cfg.set("house.hvac_cop_heat_ref", format_double(p.hvac_cop_heat_ref));
    cfg.set("house.hvac_cop_cool_ref", format_double(p.hvac_cop_cool_ref));
    cfg.set("house.cop_derate_slope_per_c", format_double(p.cop_derate_slope_per_c));
    cfg.set("house.tank_volume_l", format_double(p.tank_volume_l));
    cfg.set("house.tank_c_j_per_k", format_double(p.tank_c_j_per_k));
    cfg.set("house.tank_r_k_per_w", format_double(p.tank_r_k_per_w));
    cfg.set("house.tank_setpoint_c", format_double(p.tank_setpoint_c));
    cfg.set("house.tank_deadband_halfwidth_c", format_double(p.tank_deadband_halfwidth_c));
    cfg.set("house.wh_rated_electric_kw", format_double(p.wh_rated_electric_kw));
    cfg.set("house.wh_cop", format_double(p.wh_cop));
    cfg.set("house.inlet_temp_c", format_double(p.inlet_temp_c));
}

}  // namespace flexhome::sim
