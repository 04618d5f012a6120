#ifndef HYDROSIM_HYDRO_PHYSICS_HPP
#define HYDROSIM_HYDRO_PHYSICS_HPP

#include "hydrosim/turbine.hpp"
#include "hydrosim/units.hpp"

namespace hydrosim {

constexpr double kWaterDensityKgM3 = 1000.0;
constexpr double kGravityMS2 = 9.81;

/// Forebay/tailwater pair and the resulting head. A plant with zero or
/// negative head is not operable.
struct HeadState {
    Length forebay_elevation;
    Length tailwater_elevation;
    Length head;

    bool operable() const { return head.value > 0.0; }
};

/// Per-unit operating point on a unit's efficiency surface.
struct EfficiencyQuery {
    double q_hat = 0.0;  // actual flow / rated flow
    double h_hat = 1.0;  // actual head / rated head
};

/// head = forebay - tailwater. Unit tags must match; tailwater above
/// forebay is an error (NegativeHeadError).
Length compute_head(Length forebay, Length tailwater);

/// compute_head packaged with its inputs and the operability flag.
HeadState make_head_state(Length forebay, Length tailwater);

/// Head-dependent capacity derating: p_max_nominal * (head/rated_head)^1.5.
/// Monotone increasing in head; 0 at zero head.
double derate_max_power(double p_max_nominal_mw, Length head, Length rated_head);

/// Parametric turbine efficiency surface.
///
///   eta(q^, h^) = eta_peak * max(0, 1 - width*|q^ - q_peak|^exponent)
///                          * max(0, 1 - k*|h^ - 1|^1.5)
///                          * rolloff(q^)
///
/// rolloff ramps from 0 at the no-load flow to 1 over a 0.15 per-unit span,
/// so no unit reports usable efficiency below its no-load flow. Continuous
/// everywhere; peak value eta_peak reached exactly at (q_peak, 1).
double efficiency(const TurbineUnit& unit, const EfficiencyQuery& query);

/// rho * g * q * h * eta, in MW. flow in m3/s; head converted to meters.
double mechanical_power(double flow_m3s, Length head, double eta);

/// Orifice law q = coeff * gate * sqrt(head), all per-unit.
double gate_to_flow(double gate, double head_pu, double full_gate_flow_coeff = 1.0);

} // namespace hydrosim

#endif
