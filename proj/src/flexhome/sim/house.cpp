#include "flexhome/sim/house.hpp"

#include <cmath>

#include "flexhome/common/errors.hpp"

namespace flexhome::sim {

const char* hvac_mode_name(HvacMode m) {
    switch (m) {
        case HvacMode::Off: return "OFF";
        case HvacMode::Heat: return "HEAT";
        case HvacMode::Cool: return "COOL";
    }
    return "OFF";
}

HvacMode hvac_mode_from_name(const std::string& s) {
    if (s == "OFF") return HvacMode::Off;
    if (s == "HEAT") return HvacMode::Heat;
    if (s == "COOL") return HvacMode::Cool;
    throw_invalid("unknown hvac_mode `" + s + "`");
}

void HouseParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw_config(std::string("house param `") + name + "` must be > 0");
    };
    positive(c_air_j_per_k, "c_air_j_per_k");
    positive(c_mass_j_per_k, "c_mass_j_per_k");
    positive(r_out_k_per_w, "r_out_k_per_w");
    positive(r_mass_k_per_w, "r_mass_k_per_w");
    positive(tank_volume_l, "tank_volume_l");
    positive(tank_c_j_per_k, "tank_c_j_per_k");
    positive(tank_r_k_per_w, "tank_r_k_per_w");
    positive(hvac_rated_electric_kw, "hvac_rated_electric_kw");
    positive(wh_rated_electric_kw, "wh_rated_electric_kw");
    positive(hvac_cop_heat_ref, "hvac_cop_heat_ref");
    positive(hvac_cop_cool_ref, "hvac_cop_cool_ref");
    positive(wh_cop, "wh_cop");
    positive(deadband_halfwidth_c, "deadband_halfwidth_c");
    positive(tank_deadband_halfwidth_c, "tank_deadband_halfwidth_c");
    if (solar_aperture_m2 < 0) throw_config("house param `solar_aperture_m2` must be >= 0");
    if (internal_gain_w < 0) throw_config("house param `internal_gain_w` must be >= 0");
    if (cop_derate_slope_per_c < 0) throw_config("house param `cop_derate_slope_per_c` must be >= 0");
    if (!(cool_setpoint_c > heat_setpoint_c + 2.0 * deadband_halfwidth_c))
        throw_config("house params: cool_setpoint must exceed heat_setpoint by more than the full deadband");
}

HouseState step_thermal(const HouseState& state, const HouseParams& p, const WeatherSample& w,
                        double hvac_thermal_w, double wh_thermal_w, double draw_lpm, double dt_s) {
    if (!(dt_s > 0)) throw_invalid("step_thermal: dt must be > 0");

    const double tank_loss_to_air_w = (state.t_tank_c - state.t_air_c) / p.tank_r_k_per_w;

    const double q_air_w = (w.t_out_c - state.t_air_c) / p.r_out_k_per_w +
                           (state.t_mass_c - state.t_air_c) / p.r_mass_k_per_w +
                           w.solar_wm2 * p.solar_aperture_m2 + p.internal_gain_w + hvac_thermal_w +
                           tank_loss_to_air_w;
    const double q_mass_w = (state.t_air_c - state.t_mass_c) / p.r_mass_k_per_w;
    const double q_tank_w = (state.t_air_c - state.t_tank_c) / p.tank_r_k_per_w + wh_thermal_w;

    HouseState next = state;
    next.t_air_c = state.t_air_c + dt_s / p.c_air_j_per_k * q_air_w;
    next.t_mass_c = state.t_mass_c + dt_s / p.c_mass_j_per_k * q_mass_w;
    const double draw_frac = draw_lpm * dt_s / 60.0 / p.tank_volume_l;
    next.t_tank_c = state.t_tank_c + dt_s / p.tank_c_j_per_k * q_tank_w +
                    draw_frac * (p.inlet_temp_c - state.t_tank_c);

    if (!std::isfinite(next.t_air_c) || !std::isfinite(next.t_mass_c) || !std::isfinite(next.t_tank_c))
        throw_sim_fault("non-finite temperature after thermal step");
    return next;
}

double hvac_derate_factor(const HouseParams& p, double t_out_c) {
    const double f = 1.0 - p.cop_derate_slope_per_c * std::fabs(t_out_c - kHvacRefOutdoorC);
    return f < kHvacDerateFloor ? kHvacDerateFloor : f;
}

HvacDecision hvac_controller(const HouseState& state, const HouseParams& p, double t_out_c,
                             SeasonMode season, HvacAllow allow) {
    if (season == SeasonMode::HeatOnly) allow.cool = false;
    if (season == SeasonMode::CoolOnly) allow.heat = false;

    HvacMode mode = state.hvac_mode;
    if (mode == HvacMode::Heat && !allow.heat) mode = HvacMode::Off;
    if (mode == HvacMode::Cool && !allow.cool) mode = HvacMode::Off;

    const double heat_on_below = p.heat_setpoint_c - p.deadband_halfwidth_c;
    const double heat_off_above = p.heat_setpoint_c + p.deadband_halfwidth_c;
    const double cool_on_above = p.cool_setpoint_c + p.deadband_halfwidth_c;
    const double cool_off_below = p.cool_setpoint_c - p.deadband_halfwidth_c;

    switch (mode) {
        case HvacMode::Heat:
            if (state.t_air_c > heat_off_above) mode = HvacMode::Off;
            break;
        case HvacMode::Cool:
            if (state.t_air_c < cool_off_below) mode = HvacMode::Off;
            break;
        case HvacMode::Off:
            if (allow.heat && state.t_air_c < heat_on_below) mode = HvacMode::Heat;
            else if (allow.cool && state.t_air_c > cool_on_above) mode = HvacMode::Cool;
            break;
    }

    HvacDecision d;
    d.mode = mode;
    if (mode == HvacMode::Off) return d;

    const double f = hvac_derate_factor(p, t_out_c);
    d.electric_kw = quantize_kw(p.hvac_rated_electric_kw * f);
    const double cop = (mode == HvacMode::Heat ? p.hvac_cop_heat_ref : p.hvac_cop_cool_ref) * f;
    d.thermal_w = d.electric_kw * 1000.0 * cop * (mode == HvacMode::Cool ? -1.0 : 1.0);
    return d;
}

WhDecision wh_controller(const HouseState& state, const HouseParams& p) {
    bool on = state.wh_on;
    if (on) {
        if (state.t_tank_c > p.tank_setpoint_c + p.tank_deadband_halfwidth_c) on = false;
    } else {
        if (state.t_tank_c < p.tank_setpoint_c - p.tank_deadband_halfwidth_c) on = true;
    }

    WhDecision d;
    d.on = on;
    if (on) {
        d.electric_kw = quantize_kw(p.wh_rated_electric_kw);
        d.thermal_w = d.electric_kw * 1000.0 * p.wh_cop;
    }
    return d;
}

}  // namespace flexhome::sim
