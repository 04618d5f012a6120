#include "hydrosim/hydro_physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydrosim/errors.hpp"

namespace hydrosim {

const char* to_string(TurbineType t) {
    switch (t) {
        case TurbineType::Francis: return "francis";
        case TurbineType::Kaplan: return "kaplan";
        case TurbineType::Propeller: return "propeller";
        default: return "pelton";
    }
}

TurbineType turbine_type_from_string(const std::string& s) {
    if (s == "francis") return TurbineType::Francis;
    if (s == "kaplan") return TurbineType::Kaplan;
    if (s == "propeller") return TurbineType::Propeller;
    if (s == "pelton") return TurbineType::Pelton;
    throw ValidationError("unknown turbine type '" + s + "'");
}

TurbineUnit TurbineUnit::defaults_for(TurbineType type) {
    TurbineUnit u;
    u.turbine_type = type;
    switch (type) {
        case TurbineType::Francis:
            u.q_hat_peak = 0.80;
            u.shape_exponent = 2.2;
            u.shape_width = 1.8;
            u.head_falloff_k = 0.5;
            u.forbidden_bands = {{0.40, 0.60}};
            break;
        case TurbineType::Kaplan:
            // Double-regulated: flat curve, weak head sensitivity.
            u.q_hat_peak = 0.75;
            u.shape_exponent = 2.0;
            u.shape_width = 0.6;
            u.head_falloff_k = 0.2;
            break;
        case TurbineType::Propeller:
            // Fixed blade: sharp peak near full flow.
            u.q_hat_peak = 0.95;
            u.shape_exponent = 2.0;
            u.shape_width = 3.5;
            u.head_falloff_k = 0.5;
            u.forbidden_bands = {{0.40, 0.60}};
            break;
        case TurbineType::Pelton:
            u.q_hat_peak = 0.80;
            u.shape_exponent = 2.0;
            u.shape_width = 0.8;
            u.head_falloff_k = 0.1;
            break;
    }
    return u;
}

void TurbineUnit::validate() const {
    auto fail = [this](const std::string& what) {
        throw ValidationError("unit '" + name + "': " + what);
    };
    if (rated_power_mw <= 0) fail("rated_power_mw must be > 0");
    if (rated_head.value <= 0) fail("rated_head must be > 0");
    if (rated_flow_m3s <= 0) fail("rated_flow_m3s must be > 0");
    if (full_gate_flow_coeff <= 0) fail("full_gate_flow_coeff must be > 0");
    if (eta_peak <= 0 || eta_peak > 1) fail("eta_peak must be in (0, 1]");
    if (q_hat_peak <= 0 || q_hat_peak > 1) fail("q_hat_peak must be in (0, 1]");
    if (shape_exponent <= 0 || shape_width < 0) fail("efficiency shape parameters must be positive");
    if (head_falloff_k < 0) fail("head_falloff_k must be >= 0");
    if (!(min_load_frac >= 0 && min_load_frac < max_load_frac && max_load_frac <= 1))
        fail("require 0 <= min_load_frac < max_load_frac <= 1");
    double prev_hi = -1.0;
    for (const auto& [lo, hi] : forbidden_bands) {
        if (!(lo < hi))
            fail("forbidden band (" + std::to_string(lo) + ", " + std::to_string(hi) +
                 ") must have lo < hi");
        if (lo < min_load_frac || hi > max_load_frac)
            fail("forbidden band (" + std::to_string(lo) + ", " + std::to_string(hi) +
                 ") must lie within [min_load_frac, max_load_frac]");
        if (lo < prev_hi)
            fail("forbidden bands must be sorted and pairwise disjoint");
        prev_hi = hi;
    }
    if (water_time_constant_tw_s <= 0) fail("water_time_constant_tw_s must be > 0");
    if (turbine_gain_at <= 0) fail("turbine_gain_at must be > 0");
    if (no_load_flow_qnl < 0 || no_load_flow_qnl >= 1) fail("no_load_flow_qnl must be in [0, 1)");
    if (no_load_flow_qnl >= q_hat_peak) fail("no_load_flow_qnl must be below q_hat_peak");
    if (inertia_h_s <= 0) fail("inertia_h_s must be > 0");
    if (mva_rating <= 0) fail("mva_rating must be > 0");
    if (shaft_speed_hz <= 0) fail("shaft_speed_hz must be > 0");
}

Length compute_head(Length forebay, Length tailwater) {
    if (forebay.unit != tailwater.unit)
        throw UnitMismatchError("forebay in " + std::string(to_string(forebay.unit)) +
                                " but tailwater in " + to_string(tailwater.unit));
    if (tailwater.value > forebay.value)
        throw NegativeHeadError("tailwater above forebay (" + std::to_string(tailwater.value) +
                                " > " + std::to_string(forebay.value) + " " +
                                to_string(forebay.unit) + ")");
    return Length{forebay.value - tailwater.value, forebay.unit};
}

HeadState make_head_state(Length forebay, Length tailwater) {
    return HeadState{forebay, tailwater, compute_head(forebay, tailwater)};
}

double derate_max_power(double p_max_nominal_mw, Length head, Length rated_head) {
    double h = head.in_meters();
    double h_rated = rated_head.in_meters();
    if (h_rated <= 0) throw InvalidHeadError("rated head must be > 0");
    if (h < 0) throw InvalidHeadError("head must be >= 0");
    return p_max_nominal_mw * std::pow(h / h_rated, 1.5);
}

double efficiency(const TurbineUnit& unit, const EfficiencyQuery& query) {
    if (query.q_hat < 0) throw PreconditionError("q_hat must be >= 0");
    if (query.h_hat <= 0) throw PreconditionError("h_hat must be > 0");

    double flow_term =
        std::max(0.0, 1.0 - unit.shape_width *
                              std::pow(std::abs(query.q_hat - unit.q_hat_peak), unit.shape_exponent));
    double head_term =
        std::max(0.0, 1.0 - unit.head_falloff_k * std::pow(std::abs(query.h_hat - 1.0), 1.5));

    // Low-flow rolloff: nothing usable at or below the no-load flow. The ramp
    // completes before q_hat_peak so the peak value is never touched.
    double span = std::clamp(unit.q_hat_peak - unit.no_load_flow_qnl, 1e-9, 0.15);
    double rolloff = std::clamp((query.q_hat - unit.no_load_flow_qnl) / span, 0.0, 1.0);

    return unit.eta_peak * flow_term * head_term * rolloff;
}

double mechanical_power(double flow_m3s, Length head, double eta) {
    if (flow_m3s < 0) throw PreconditionError("flow must be >= 0");
    if (head.value < 0) throw PreconditionError("head must be >= 0");
    if (eta < 0 || eta > 1) throw PreconditionError("eta must be in [0, 1]");
    return kWaterDensityKgM3 * kGravityMS2 * flow_m3s * head.in_meters() * eta / 1e6;
}

double gate_to_flow(double gate, double head_pu, double full_gate_flow_coeff) {
    if (gate < 0 || gate > 1) throw PreconditionError("gate must be in [0, 1]");
    if (head_pu <= 0) throw PreconditionError("per-unit head must be > 0");
    return full_gate_flow_coeff * gate * std::sqrt(head_pu);
}

} // namespace hydrosim
