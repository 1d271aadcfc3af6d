#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "flexhome/sim/weather.hpp"

namespace flexhome::sim {

enum class HvacMode : int { Off = 0, Heat = 1, Cool = 2 };
enum class SeasonMode : int { HeatOnly, CoolOnly, Auto };

const char* hvac_mode_name(HvacMode m);
HvacMode hvac_mode_from_name(const std::string& s);

// Outdoor temperature at which the rated electric draw and reference COPs
// apply; both derate linearly as |t_out - ref| grows (floored at 20%).
inline constexpr double kHvacRefOutdoorC = 15.0;
inline constexpr double kHvacDerateFloor = 0.2;

// Two-node envelope (indoor air + lumped thermal mass) plus a one-node hot
// water tank coupled to the indoor air.
struct HouseParams {
    double c_air_j_per_k = 0;
    double c_mass_j_per_k = 0;
    double r_out_k_per_w = 0;        // indoor air <-> outdoor
    double r_mass_k_per_w = 0;       // indoor air <-> mass
    double solar_aperture_m2 = 0;    // effective irradiated area
    double internal_gain_w = 0;
    double heat_setpoint_c = 0;
    double cool_setpoint_c = 0;
    double deadband_halfwidth_c = 0;
    double hvac_rated_electric_kw = 0;  // at kHvacRefOutdoorC
    double hvac_cop_heat_ref = 0;
    double hvac_cop_cool_ref = 0;
    double cop_derate_slope_per_c = 0;
    double tank_volume_l = 0;
    double tank_c_j_per_k = 0;
    double tank_r_k_per_w = 0;       // tank <-> indoor air
    double tank_setpoint_c = 0;
    double tank_deadband_halfwidth_c = 0;
    double wh_rated_electric_kw = 0;
    double wh_cop = 0;
    double inlet_temp_c = 0;

    void validate() const;  // throws ConfigError on violated invariants
};

struct HouseState {
    double t_air_c = 21.0;
    double t_mass_c = 21.0;
    double t_tank_c = 50.0;
    HvacMode hvac_mode = HvacMode::Off;
    bool wh_on = false;
};

// One explicit-Euler step of the thermal network. hvac_thermal_w is signed
// (negative while cooling); draw_lpm mixes inlet water into the tank.
HouseState step_thermal(const HouseState& state, const HouseParams& params,
                        const WeatherSample& weather, double hvac_thermal_w,
                        double wh_thermal_w, double draw_lpm, double dt_s);

struct HvacDecision {
    HvacMode mode = HvacMode::Off;
    double electric_kw = 0;
    double thermal_w = 0;  // signed: > 0 heating, < 0 cooling
};

// Which directions the controller may enter. The simulate loop narrows this
// for season mode and the 12 h heat/cool changeover lockout.
struct HvacAllow {
    bool heat = true;
    bool cool = true;
};

// Deadband thermostat with hysteresis. Heating engages below
// heat_setpoint - halfwidth and releases above heat_setpoint + halfwidth;
// cooling is mirrored around cool_setpoint; inside a band the previous mode
// persists. Electric draw and COP are derated with outdoor temperature.
HvacDecision hvac_controller(const HouseState& state, const HouseParams& params,
                             double t_out_c, SeasonMode season, HvacAllow allow = {});

struct WhDecision {
    bool on = false;
    double electric_kw = 0;
    double thermal_w = 0;  // heating only
};

WhDecision wh_controller(const HouseState& state, const HouseParams& params);

// Electric powers are snapped to an integer grid of 2^-20 kW (~1 microwatt)
// before they enter a trace. Sums and differences of grid values up to a few
// thousand kW are exact in doubles, which is what makes the disaggregation
// identity `net = hvac + wh + base` and the raw-bounds sandwich hold exactly
// rather than to rounding error.
inline double quantize_kw(double kw) { return std::round(kw * 1048576.0) / 1048576.0; }

double hvac_derate_factor(const HouseParams& params, double t_out_c);

}  // namespace flexhome::sim
