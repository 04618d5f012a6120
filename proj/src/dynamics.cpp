#include "hydrosim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydrosim/errors.hpp"

namespace hydrosim {

namespace {

double deadzone(double x, double band) {
    if (std::abs(x) <= band) return 0.0;
    return x > 0 ? x - band : x + band;
}

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

struct GovernorDeriv {
    double d_integrator;
    double d_gate;
};

// Temporary-droop PI plus rate-limited servo. The integrator freezes while
// the gate is pinned at a limit in the direction of the error (anti-windup);
// the servo cannot push past a position limit.
GovernorDeriv governor_derivative(const GovernorParams& p, double omega_db_pu, double gate_ref,
                                  double integrator, double gate) {
    double e = -omega_db_pu - p.permanent_droop_rp * (gate - gate_ref);
    bool windup = (gate >= p.gate_max - 1e-12 && e > 0) || (gate <= p.gate_min + 1e-12 && e < 0);
    double d_integ = windup ? 0.0 : e / (p.temporary_droop_rt * p.reset_time_tr_s);
    double c = gate_ref + integrator + e / p.temporary_droop_rt;
    double d_gate = clamp((c - gate) / p.servo_time_tg_s, -p.gate_rate_limit, p.gate_rate_limit);
    if ((gate >= p.gate_max && d_gate > 0) || (gate <= p.gate_min && d_gate < 0)) d_gate = 0.0;
    return {d_integ, d_gate};
}

void check_turbine_range(double q, double h, const std::string& name) {
    if (!(q > 0.0 && q < 10.0 && h > 0.0 && h < 10.0) || !std::isfinite(q) || !std::isfinite(h))
        throw NumericalDivergenceError("unit '" + name + "': turbine state left (0, 10): q=" +
                                       std::to_string(q) + " h=" + std::to_string(h));
}

} // namespace

void GovernorParams::validate() const {
    if (permanent_droop_rp <= 0) throw ValidationError("permanent_droop_rp must be > 0");
    if (temporary_droop_rt <= 0) throw ValidationError("temporary_droop_rt must be > 0");
    if (reset_time_tr_s <= 0) throw ValidationError("reset_time_tr_s must be > 0");
    if (servo_time_tg_s <= 0) throw ValidationError("servo_time_tg_s must be > 0");
    if (gate_rate_limit <= 0) throw ValidationError("gate_rate_limit must be > 0");
    if (deadband_hz < 0) throw ValidationError("deadband_hz must be >= 0");
    if (!(gate_min >= 0 && gate_min < gate_max && gate_max <= 1))
        throw ValidationError("require 0 <= gate_min < gate_max <= 1");
}

TurbineState init_steady_state(const TurbineUnit& unit, const GovernorParams& governor,
                               double p0_pu, double h0_pu) {
    governor.validate();
    if (h0_pu <= 0) throw PreconditionError("initial head must be > 0");
    if (p0_pu < 0) throw PreconditionError("initial power must be >= 0");

    double q0 = p0_pu / (unit.turbine_gain_at * h0_pu) + unit.no_load_flow_qnl;
    double g0 = q0 / (unit.full_gate_flow_coeff * std::sqrt(h0_pu));
    if (g0 > governor.gate_max + 1e-12)
        throw InfeasibleInitError("unit '" + unit.name + "': steady gate " + std::to_string(g0) +
                                  " exceeds gate_max " + std::to_string(governor.gate_max) +
                                  " at head " + std::to_string(h0_pu) + " pu");
    if (g0 < governor.gate_min - 1e-12)
        throw InfeasibleInitError("unit '" + unit.name + "': steady gate " + std::to_string(g0) +
                                  " below gate_min " + std::to_string(governor.gate_min));

    TurbineState state;
    state.flow_q = q0;
    state.gate_g = g0;
    state.head_h = h0_pu;
    state.static_head = h0_pu;
    state.mech_power_pm = p0_pu;
    return state;
}

TurbineState step_nonlinear_turbine(const TurbineUnit& unit, const TurbineState& state,
                                    double gate_command, double dt_s) {
    if (dt_s <= 0) throw PreconditionError("dt must be > 0");
    if (dt_s > unit.water_time_constant_tw_s / 10.0 + 1e-12)
        throw PreconditionError("dt must be <= Tw/10");

    double g = std::max(gate_command, 1e-9) * unit.full_gate_flow_coeff;
    double tw = unit.water_time_constant_tw_s;
    double hs = state.static_head;

    auto dq = [&](double q) {
        double h = (q / g) * (q / g);
        return (hs - h) / tw;
    };
    double q = state.flow_q;
    double k1 = dq(q);
    double k2 = dq(q + 0.5 * dt_s * k1);
    double k3 = dq(q + 0.5 * dt_s * k2);
    double k4 = dq(q + dt_s * k3);
    q += dt_s / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);

    TurbineState next = state;
    next.flow_q = q;
    next.gate_g = gate_command;
    next.head_h = (q / g) * (q / g);
    next.mech_power_pm = unit.turbine_gain_at * next.head_h * (q - unit.no_load_flow_qnl);
    check_turbine_range(next.flow_q, next.head_h, unit.name);
    return next;
}

LinearizedTurbine LinearizedTurbine::init(const TurbineUnit& unit, double p0_pu) {
    // Head is pinned at 1 pu: actual water conditions never enter.
    LinearizedTurbine t;
    t.tw_s = unit.water_time_constant_tw_s;
    t.gain_at = unit.turbine_gain_at;
    t.no_load_flow_qnl = unit.no_load_flow_qnl;
    t.gate0 = p0_pu / unit.turbine_gain_at + unit.no_load_flow_qnl;
    t.pm0 = p0_pu;
    t.washout_state = 0.0;
    return t;
}

double LinearizedTurbine::pm(double gate_command) const {
    // (1 - Tw s)/(1 + 0.5 Tw s) = -2 + 3/(1 + 0.5 Tw s)
    double u = gate_command - gate0;
    return pm0 + gain_at * (-2.0 * u + washout_state);
}

double LinearizedTurbine::step(double gate_command, double dt_s) {
    if (dt_s <= 0) throw PreconditionError("dt must be > 0");
    double u = gate_command - gate0;
    double tau = 0.5 * tw_s;
    double alpha = 1.0 - std::exp(-dt_s / tau);
    washout_state += alpha * (3.0 * u - washout_state);
    return pm(gate_command);
}

double governor_step(GovernorState& state, double freq_dev_hz, const GovernorParams& params,
                     double f_nominal_hz, double dt_s) {
    if (dt_s <= 0) throw PreconditionError("dt must be > 0");
    params.validate();

    double omega_dev = deadzone(freq_dev_hz, params.deadband_hz) / f_nominal_hz;

    auto deriv = [&](double integ, double gate) {
        return governor_derivative(params, omega_dev, state.gate_ref, integ, gate);
    };
    GovernorDeriv k1 = deriv(state.integrator, state.gate);
    GovernorDeriv k2 = deriv(state.integrator + 0.5 * dt_s * k1.d_integrator,
                             state.gate + 0.5 * dt_s * k1.d_gate);
    GovernorDeriv k3 = deriv(state.integrator + 0.5 * dt_s * k2.d_integrator,
                             state.gate + 0.5 * dt_s * k2.d_gate);
    GovernorDeriv k4 =
        deriv(state.integrator + dt_s * k3.d_integrator, state.gate + dt_s * k3.d_gate);

    state.integrator += dt_s / 6.0 *
                        (k1.d_integrator + 2 * k2.d_integrator + 2 * k3.d_integrator +
                         k4.d_integrator);
    state.gate += dt_s / 6.0 * (k1.d_gate + 2 * k2.d_gate + 2 * k3.d_gate + k4.d_gate);
    state.gate = clamp(state.gate, params.gate_min, params.gate_max);
    return state.gate;
}

void GridModel::validate() const {
    if (system_base_mva <= 0) throw ValidationError("system_base_mva must be > 0");
    if (f_nominal_hz <= 0) throw ValidationError("f_nominal_hz must be > 0");
    if (load_damping_d < 0) throw ValidationError("load_damping_d must be >= 0");
    if (nonresponsive_mw < 0) throw ValidationError("nonresponsive_mw must be >= 0");
    if (nonresponsive_inertia_mws < 0) throw ValidationError("nonresponsive_inertia_mws must be >= 0");
    for (const auto& r : responsive_units) {
        r.unit.validate();
        r.governor.validate();
        if (r.initial_power_pu < 0) throw ValidationError("initial power must be >= 0");
        if (r.initial_head_pu <= 0) throw ValidationError("initial head must be > 0");
    }
    for (size_t i = 1; i < ufls_stages.size(); ++i)
        if (!(ufls_stages[i].threshold_hz < ufls_stages[i - 1].threshold_hz))
            throw ValidationError("UFLS thresholds must be strictly decreasing");
    for (const auto& s : ufls_stages)
        if (s.shed_fraction < 0 || s.shed_fraction > 1)
            throw ValidationError("UFLS shed_fraction must be in [0, 1]");
}

FrequencySimResult simulate_event(const GridModel& grid, const GenerationLossEvent& event,
                                  double duration_s, double dt_s,
                                  TurbineModelKind turbine_model) {
    grid.validate();
    if (dt_s <= 0) throw PreconditionError("dt must be > 0");
    if (dt_s > 0.02 + 1e-12) throw PreconditionError("dt must be <= 0.02 s");
    for (const auto& r : grid.responsive_units)
        if (dt_s > r.unit.water_time_constant_tw_s / 10.0 + 1e-12)
            throw PreconditionError("dt must be <= min(Tw)/10");
    if (duration_s < dt_s) throw PreconditionError("duration must cover at least one step");
    if (event.loss_mw < 0) throw PreconditionError("loss must be >= 0");

    const int n_units = static_cast<int>(grid.responsive_units.size());
    const int n_steps = static_cast<int>(std::llround(duration_s / dt_s));
    const double f_nom = grid.f_nominal_hz;
    const double base = grid.system_base_mva;

    // State layout: [omega_dev, then per unit (integrator, gate, water state)].
    // The water state is penstock flow q (nonlinear) or the washout branch
    // state (linearized).
    const int stride = 3;
    std::vector<double> y(1 + stride * n_units, 0.0);

    std::vector<TurbineState> init(n_units);
    std::vector<LinearizedTurbine> linear(n_units);
    std::vector<double> gate_ref(n_units), pm0(n_units);
    double h_agg_mws = grid.nonresponsive_inertia_mws;
    double pm_total0 = grid.nonresponsive_mw / base;
    for (int i = 0; i < n_units; ++i) {
        const auto& r = grid.responsive_units[i];
        if (turbine_model == TurbineModelKind::Nonlinear) {
            init[i] = init_steady_state(r.unit, r.governor, r.initial_power_pu, r.initial_head_pu);
            gate_ref[i] = init[i].gate_g;
            y[1 + stride * i + 2] = init[i].flow_q;
        } else {
            linear[i] = LinearizedTurbine::init(r.unit, r.initial_power_pu);
            gate_ref[i] = linear[i].gate0;
            y[1 + stride * i + 2] = 0.0;
        }
        pm0[i] = r.initial_power_pu;
        y[1 + stride * i + 0] = 0.0;
        y[1 + stride * i + 1] = gate_ref[i];
        h_agg_mws += r.unit.inertia_h_s * r.unit.mva_rating;
    }
    for (int i = 0; i < n_units; ++i) pm_total0 += pm0[i] * grid.responsive_units[i].unit.mva_rating / base;
    const double h_agg = h_agg_mws / base;  // seconds on the system base
    if (h_agg <= 0) throw PreconditionError("system has no inertia online");

    double load_pu = pm_total0;  // pre-event balance
    double event_pu = 0.0;
    std::vector<bool> ufls_fired(grid.ufls_stages.size(), false);
    double shed_total_mw = 0.0;
    bool collapsed = false;

    FrequencySimResult result;
    result.time_s.reserve(n_steps + 1);
    result.frequency_hz.reserve(n_steps + 1);
    result.gate_pu.assign(n_units, {});
    result.flow_pu.assign(n_units, {});
    result.head_pu.assign(n_units, {});
    result.pm_pu.assign(n_units, {});

    auto unit_pm = [&](int i, const std::vector<double>& s, double& h_out, double& q_out) {
        const auto& r = grid.responsive_units[i];
        double gate = s[1 + stride * i + 1];
        if (turbine_model == TurbineModelKind::Nonlinear) {
            double g = std::max(gate, 1e-9) * r.unit.full_gate_flow_coeff;
            double q = s[1 + stride * i + 2];
            double h = (q / g) * (q / g);
            h_out = h;
            q_out = q;
            return r.unit.turbine_gain_at * h * (q - r.unit.no_load_flow_qnl);
        }
        double u = gate - linear[i].gate0;
        double z = s[1 + stride * i + 2];
        h_out = 1.0;
        q_out = std::max(0.0, linear[i].pm0 + r.unit.turbine_gain_at * (-2.0 * u + z)) /
                    r.unit.turbine_gain_at +
                r.unit.no_load_flow_qnl;
        return linear[i].pm0 + r.unit.turbine_gain_at * (-2.0 * u + z);
    };

    auto derivative = [&](const std::vector<double>& s, std::vector<double>& ds) {
        double omega = s[0];
        double pm_total = grid.nonresponsive_mw / base;
        for (int i = 0; i < n_units; ++i) {
            const auto& r = grid.responsive_units[i];
            const auto& gov = r.governor;
            double integ = s[1 + stride * i + 0];
            double gate = s[1 + stride * i + 1];

            double omega_db = deadzone(omega * f_nom, gov.deadband_hz) / f_nom;
            GovernorDeriv gd = governor_derivative(gov, omega_db, gate_ref[i], integ, gate);
            ds[1 + stride * i + 0] = gd.d_integrator;
            ds[1 + stride * i + 1] = gd.d_gate;

            double h, q;
            double pm = unit_pm(i, s, h, q);
            if (turbine_model == TurbineModelKind::Nonlinear) {
                ds[1 + stride * i + 2] = (init[i].static_head - h) / r.unit.water_time_constant_tw_s;
            } else {
                double u = gate - linear[i].gate0;
                ds[1 + stride * i + 2] =
                    (3.0 * u - s[1 + stride * i + 2]) / (0.5 * r.unit.water_time_constant_tw_s);
            }
            pm_total += pm * r.unit.mva_rating / base;
        }
        double pe = load_pu + event_pu + grid.load_damping_d * omega;
        ds[0] = (pm_total - pe) / (2.0 * h_agg);
    };

    auto record = [&](double t) {
        result.time_s.push_back(t);
        result.frequency_hz.push_back(f_nom * (1.0 + y[0]));
        for (int i = 0; i < n_units; ++i) {
            double h, q;
            double pm = unit_pm(i, y, h, q);
            result.gate_pu[i].push_back(y[1 + stride * i + 1]);
            result.flow_pu[i].push_back(q);
            result.head_pu[i].push_back(h);
            result.pm_pu[i].push_back(pm);
        }
    };

    std::vector<double> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
    record(0.0);
    for (int step = 0; step < n_steps; ++step) {
        double t = step * dt_s;
        if (event.loss_mw > 0 && t + 1e-12 >= event.t0_s) event_pu = event.loss_mw / base;

        derivative(y, k1);
        for (size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * dt_s * k1[j];
        derivative(tmp, k2);
        for (size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * dt_s * k2[j];
        derivative(tmp, k3);
        for (size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + dt_s * k3[j];
        derivative(tmp, k4);
        for (size_t j = 0; j < y.size(); ++j)
            y[j] += dt_s / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);

        for (int i = 0; i < n_units; ++i) {
            const auto& gov = grid.responsive_units[i].governor;
            y[1 + stride * i + 1] = clamp(y[1 + stride * i + 1], gov.gate_min, gov.gate_max);
            if (turbine_model == TurbineModelKind::Nonlinear) {
                double h, q;
                unit_pm(i, y, h, q);
                check_turbine_range(q, h, grid.responsive_units[i].unit.name);
            }
        }

        double f = f_nom * (1.0 + y[0]);
        for (size_t k = 0; k < grid.ufls_stages.size(); ++k) {
            if (!ufls_fired[k] && f <= grid.ufls_stages[k].threshold_hz) {
                ufls_fired[k] = true;
                double shed = grid.ufls_stages[k].shed_fraction * load_pu;
                load_pu -= shed;
                shed_total_mw += shed * base;
            }
        }
        if (!grid.ufls_stages.empty() && f < grid.ufls_stages.back().threshold_hz - 1.0)
            collapsed = true;

        record((step + 1) * dt_s);
    }

    // Event metrics.
    SimMetrics& m = result.metrics;
    const auto& f_series = result.frequency_hz;
    int i0 = std::min(static_cast<int>(std::llround(event.t0_s / dt_s)), n_steps);
    int i_half = std::min(i0 + static_cast<int>(std::llround(0.5 / dt_s)), n_steps);
    if (i_half > i0)
        m.rocof_hz_per_s = (f_series[i_half] - f_series[i0]) / ((i_half - i0) * dt_s);
    auto nadir_it = std::min_element(f_series.begin(), f_series.end());
    m.nadir_hz = *nadir_it;
    m.nadir_time_s = (nadir_it - f_series.begin()) * dt_s;

    int tail = std::max(1, static_cast<int>(f_series.size() / 10));
    double f_tail = 0.0;
    for (size_t j = f_series.size() - tail; j < f_series.size(); ++j) f_tail += f_series[j];
    m.settling_deviation_hz = f_tail / tail - f_nom;

    for (int i = 0; i < n_units; ++i) {
        const auto& series = result.pm_pu[i];
        double pm_tail = 0.0;
        for (size_t j = series.size() - tail; j < series.size(); ++j) pm_tail += series[j];
        m.delivered_response_mw +=
            (pm_tail / tail - pm0[i]) * grid.responsive_units[i].unit.mva_rating;
    }
    m.ufls_shed_mw = shed_total_mw;
    m.frequency_collapse = collapsed;
    return result;
}

double aggregate_stored_energy(const std::vector<std::pair<TurbineUnit, bool>>& units_online) {
    double energy = 0.0;
    for (const auto& [unit, online] : units_online)
        if (online) energy += unit.inertia_h_s * unit.mva_rating;
    return energy;
}

RoughZoneDiagnostic inject_rough_zone_oscillation(const TurbineUnit& unit, double power_fraction,
                                                  double shaft_speed_hz, double duration_s,
                                                  double dt_s, double amplitude_fraction) {
    if (dt_s <= 0 || duration_s < dt_s) throw PreconditionError("bad duration/dt");
    if (shaft_speed_hz <= 0) throw PreconditionError("shaft speed must be > 0");
    if (amplitude_fraction < 0.05)
        throw PreconditionError("rough-zone swing amplitude is at least 5% of rating");

    const int n = static_cast<int>(std::llround(duration_s / dt_s));
    RoughZoneDiagnostic diag;
    diag.pm_perturbation_mw.assign(n, 0.0);
    for (const auto& [lo, hi] : unit.forbidden_bands) {
        if (power_fraction > lo && power_fraction < hi) {
            diag.in_rough_zone = true;
            break;
        }
    }
    if (!diag.in_rough_zone) return diag;

    double amplitude = amplitude_fraction * unit.rated_power_mw;
    double omega = 2.0 * M_PI * shaft_speed_hz / 4.0;
    for (int i = 0; i < n; ++i) diag.pm_perturbation_mw[i] = amplitude * std::sin(omega * i * dt_s);
    return diag;
}

} // namespace hydrosim
