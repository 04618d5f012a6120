#ifndef HYDROSIM_TURBINE_HPP
#define HYDROSIM_TURBINE_HPP

#include <string>
#include <utility>
#include <vector>

#include "hydrosim/units.hpp"

namespace hydrosim {

enum class TurbineType { Francis, Kaplan, Propeller, Pelton };

const char* to_string(TurbineType t);
TurbineType turbine_type_from_string(const std::string& s);

/// One hydro generating unit: ratings, efficiency-shape parameters,
/// forbidden (rough/cavitation) bands, penstock and inertia constants.
///
/// Efficiency-shape parameters (q_hat_peak, shape_exponent, shape_width,
/// head_falloff_k) default per turbine type; see defaults_for(). They are
/// configuration, not measured data.
struct TurbineUnit {
    std::string name = "unit";
    TurbineType turbine_type = TurbineType::Francis;

    double rated_power_mw = 100.0;
    Length rated_head = Length::meters(100.0);
    double rated_flow_m3s = 120.0;

    // Per-unit flow at full gate and unit head. Absorbed into the rated
    // quantities by default (1.0).
    double full_gate_flow_coeff = 1.0;

    // Efficiency surface shape.
    double eta_peak = 0.93;           // peak efficiency, (0, 1]
    double q_hat_peak = 0.80;         // per-unit flow of peak efficiency
    double shape_exponent = 2.2;      // falloff exponent in |q_hat - q_hat_peak|
    double shape_width = 1.8;         // falloff width factor
    double head_falloff_k = 0.5;      // head-deviation sensitivity

    // Cavitation-avoidance loading bounds and rough-zone bands, in per-unit
    // power fraction of the (derated) maximum.
    double min_load_frac = 0.10;
    double max_load_frac = 1.00;
    std::vector<std::pair<double, double>> forbidden_bands;

    // Penstock / turbine dynamic constants (per-unit on the unit base).
    double water_time_constant_tw_s = 1.0;
    double no_load_flow_qnl = 0.08;
    double turbine_gain_at = 1.2;

    // Rotating machine constants.
    double inertia_h_s = 3.5;         // MW·s per MVA
    double mva_rating = 125.0;
    double shaft_speed_hz = 2.0;

    /// Unit populated with the shipped per-type efficiency defaults.
    static TurbineUnit defaults_for(TurbineType type);

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

} // namespace hydrosim

#endif
