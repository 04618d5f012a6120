// Acceptance suite: one line per criterion, PASS/FAIL with timing.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hydrosim/dispatch.hpp"
#include "hydrosim/dynamics.hpp"
#include "hydrosim/hydro_physics.hpp"
#include "hydrosim/protection.hpp"
#include "hydrosim/river_network.hpp"
#include "hydrosim/scenario.hpp"

using namespace hydrosim;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// --- criterion 1: Grand Coulee derating --------------------------------

Criterion grand_coulee_derating() {
    Criterion c;
    auto t0 = Clock::now();
    double derated = derate_max_power(6500.0, Length::feet(260.0), Length::feet(330.0));
    double runtime_ms = ms_since(t0);

    double factor = derated / 6500.0;
    double expected_factor = std::pow(260.0 / 330.0, 1.5);
    c.require(std::abs(factor - expected_factor) < 1e-6,
              "derate factor " + fmt(factor) + " != (260/330)^1.5");
    c.require(1.0 - factor > 0.30, "derate " + fmt(1.0 - factor) + " not > 30%");
    c.require(std::abs(derated - 4545.0) / 4545.0 < 0.005,
              "derated output " + fmt(derated) + " MW not within 0.5% of 4,545 MW");
    c.require(runtime_ms < 1.0, "runtime " + fmt(runtime_ms) + " ms >= 1 ms");
    c.detail = c.pass ? "factor " + fmt(factor) + ", output " + fmt(derated) + " MW" : c.detail;
    return c;
}

// --- criterion 2: non-minimum phase ------------------------------------

Criterion non_minimum_phase() {
    Criterion c;
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GovernorParams gov;
    int dipped = 0, cases = 100;
    for (int i = 0; i < cases; ++i) {
        TurbineUnit unit = TurbineUnit::defaults_for(TurbineType::Francis);
        unit.water_time_constant_tw_s = 0.5 + 2.5 * u(rng);
        unit.turbine_gain_at = 0.9 + 0.5 * u(rng);
        unit.no_load_flow_qnl = 0.15 * u(rng);
        double h0 = 0.7 + 0.4 * u(rng);
        double g0_target = 0.2 + 0.6 * u(rng);  // leave stepping headroom
        double q0 = g0_target * std::sqrt(h0);
        double p0 = unit.turbine_gain_at * h0 * (q0 - unit.no_load_flow_qnl);
        if (p0 < 0) p0 = 0;
        TurbineState s = init_steady_state(unit, gov, p0, h0);
        double step = 0.02 + u(rng) * std::min(0.1, gov.gate_max - s.gate_g - 1e-6);
        double gate = s.gate_g + step;

        double dt = unit.water_time_constant_tw_s / 100.0;
        int steps_tw = 100;
        TurbineState walk = s;
        double min_pm = s.mech_power_pm;
        for (int k = 0; k < steps_tw; ++k) {
            walk = step_nonlinear_turbine(unit, walk, gate, dt);
            min_pm = std::min(min_pm, walk.mech_power_pm);
        }
        for (int k = 0; k < 4 * steps_tw; ++k) walk = step_nonlinear_turbine(unit, walk, gate, dt);
        if (min_pm < s.mech_power_pm && walk.mech_power_pm > s.mech_power_pm) ++dipped;
    }
    c.require(dipped == cases, fmt(dipped) + "/100 cases dipped before rising");
    if (c.pass) c.detail = "100/100 dip-then-rise";
    return c;
}

// --- criterion 3: droop equilibrium -------------------------------------

Criterion droop_equilibrium() {
    Criterion c;
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        GridModel grid;
        int n = 1 + static_cast<int>(u(rng) * 3.0);
        if (n > 3) n = 3;
        double mva_total = 0.0, droop_sum = 0.0, tau_max = 0.0;
        for (int k = 0; k < n; ++k) {
            ResponsiveUnit r;
            r.unit = TurbineUnit::defaults_for(TurbineType::Francis);
            r.unit.mva_rating = 50.0 + 350.0 * u(rng);
            r.unit.inertia_h_s = 3.0 + 2.0 * u(rng);
            r.unit.water_time_constant_tw_s = 0.8 + 0.7 * u(rng);
            r.unit.turbine_gain_at = 1.0;  // unity gain: gate droop == MW droop
            r.unit.no_load_flow_qnl = 0.1 * u(rng);
            r.governor.permanent_droop_rp = 0.04 + 0.04 * u(rng);
            r.governor.temporary_droop_rt = 0.2 + 0.3 * u(rng);
            r.governor.reset_time_tr_s = 4.0 + 3.0 * u(rng);
            r.governor.deadband_hz = 0.0;
            r.governor.gate_rate_limit = 0.15;
            r.initial_power_pu = 0.4 + 0.2 * u(rng);
            r.initial_head_pu = 1.0;
            mva_total += r.unit.mva_rating;
            tau_max = std::max(tau_max, r.governor.reset_time_tr_s *
                                            r.governor.temporary_droop_rt /
                                            r.governor.permanent_droop_rp);
            grid.responsive_units.push_back(r);
        }
        grid.system_base_mva = mva_total;
        grid.load_damping_d = 0.5 + 1.5 * u(rng);
        for (const auto& r : grid.responsive_units)
            droop_sum += (1.0 / r.governor.permanent_droop_rp) * r.unit.mva_rating /
                         grid.system_base_mva;

        double dp_pu = 0.002 + 0.006 * u(rng);
        double analytic_hz = -dp_pu / (droop_sum + grid.load_damping_d) * grid.f_nominal_hz;

        GenerationLossEvent event{1.0, dp_pu * grid.system_base_mva};
        double duration = std::max(120.0, 15.0 * tau_max);
        FrequencySimResult r = simulate_event(grid, event, duration, 0.02);
        worst = std::max(worst, std::abs(r.metrics.settling_deviation_hz - analytic_hz));
    }
    c.require(worst < 1e-4, "worst settling error " + fmt(worst) + " Hz >= 1e-4");
    if (c.pass) c.detail = "50/50 within 1e-4 Hz (worst " + fmt(worst) + ")";
    return c;
}

// --- criterion 4: head blindness contrast --------------------------------

Criterion head_blindness() {
    Criterion c;
    auto make_grid = [&](double h0, TurbineModelKind) {
        GridModel grid;
        grid.system_base_mva = 125.0;
        ResponsiveUnit r;
        r.unit = TurbineUnit::defaults_for(TurbineType::Francis);
        r.unit.mva_rating = 125.0;
        r.governor.deadband_hz = 0.036;
        r.initial_power_pu = 0.5;
        r.initial_head_pu = h0;
        grid.responsive_units.push_back(r);
        return grid;
    };
    GenerationLossEvent event{1.0, 0.05 * 125.0};

    // Legacy comparator: identical outputs at h0 = 0.8 and 1.0 (max diff 0).
    FrequencySimResult lin_low =
        simulate_event(make_grid(0.8, TurbineModelKind::Linearized), event, 30.0, 0.01,
                       TurbineModelKind::Linearized);
    FrequencySimResult lin_nom =
        simulate_event(make_grid(1.0, TurbineModelKind::Linearized), event, 30.0, 0.01,
                       TurbineModelKind::Linearized);
    double lin_diff = 0.0;
    for (size_t t = 0; t < lin_low.pm_pu[0].size(); ++t)
        lin_diff = std::max(lin_diff, std::abs(lin_low.pm_pu[0][t] - lin_nom.pm_pu[0][t]));
    c.require(lin_diff == 0.0, "linearized outputs differ by " + fmt(lin_diff));

    // Nonlinear model: a 5% gate step responds differently at 0.8 vs 1.0 pu head.
    TurbineUnit unit = TurbineUnit::defaults_for(TurbineType::Francis);
    GovernorParams gov;
    double nl_diff = 0.0;
    TurbineState a = init_steady_state(unit, gov, 0.5, 0.8);
    TurbineState b = init_steady_state(unit, gov, 0.5, 1.0);
    TurbineState wa = a, wb = b;
    for (int k = 0; k < 1000; ++k) {
        wa = step_nonlinear_turbine(unit, wa, a.gate_g + 0.05, 0.01);
        wb = step_nonlinear_turbine(unit, wb, b.gate_g + 0.05, 0.01);
        nl_diff = std::max(nl_diff, std::abs((wa.mech_power_pm - a.mech_power_pm) -
                                             (wb.mech_power_pm - b.mech_power_pm)));
    }
    c.require(nl_diff > 0.01, "nonlinear head sensitivity only " + fmt(nl_diff) + " pu");
    if (c.pass)
        c.detail = "linearized diff 0, nonlinear diff " + fmt(nl_diff) + " pu of rating";
    return c;
}

// --- criterion 5: low-head response limitation ---------------------------

Criterion low_head_response(const std::string& scenario_dir) {
    Criterion c;
    Scenario scenario = load_scenario(scenario_dir + "/two_area.json");
    scenario.solver.duration_s = 60.0;

    auto run_at = [&](double h0) {
        Scenario s = scenario;
        for (auto& per_node : s.initial_head_pu)
            for (auto& h : per_node) h = h0;
        return simulate_event(s.build_grid_model(), s.event, s.solver.duration_s, s.solver.dt_s);
    };
    auto first_gate_max = [](const FrequencySimResult& r) {
        double t_first = std::numeric_limits<double>::infinity();
        for (size_t u = 0; u < r.gate_pu.size(); ++u)
            for (size_t t = 0; t < r.gate_pu[u].size(); ++t)
                if (r.gate_pu[u][t] >= 1.0 - 1e-9) {
                    t_first = std::min(t_first, r.time_s[t]);
                    break;
                }
        return t_first;
    };

    FrequencySimResult nominal = run_at(1.0);
    FrequencySimResult low = run_at(0.75);
    c.require(low.metrics.delivered_response_mw < nominal.metrics.delivered_response_mw,
              "low-head response " + fmt(low.metrics.delivered_response_mw) +
                  " MW not below nominal " + fmt(nominal.metrics.delivered_response_mw) + " MW");
    double t_low = first_gate_max(low), t_nom = first_gate_max(nominal);
    c.require(t_low < t_nom, "gate saturation at h0=0.75 (t=" + fmt(t_low) +
                                 ") not earlier than at h0=1.0 (t=" + fmt(t_nom) + ")");
    if (c.pass)
        c.detail = "response " + fmt(low.metrics.delivered_response_mw) + " vs " +
                   fmt(nominal.metrics.delivered_response_mw) + " MW; saturation " + fmt(t_low) +
                   " vs " + fmt(t_nom) + " s";
    return c;
}

// --- criterion 6: rough-zone safety and optimality ------------------------

struct OracleBest {
    double objective = -1.0;
    double total = 0.0;
};

// Independent exhaustive search over the same candidate grid (values
// precomputed per candidate; selection mirrors the documented chain).
OracleBest brute_oracle(const PlantDispatchProblem& prob) {
    const int n = static_cast<int>(prob.units.size());
    const double res = prob.resolution_mw;
    std::vector<std::vector<double>> cand_p(n), cand_v(n);
    for (int i = 0; i < n; ++i) {
        cand_p[i].push_back(0.0);  // off
        cand_v[i].push_back(0.0);
        double p_max =
            derate_max_power(prob.units[i].rated_power_mw, prob.head, prob.units[i].rated_head);
        double h_hat = prob.head.in_meters() / prob.units[i].rated_head.in_meters();
        for (const auto& r : feasible_ranges(prob.units[i], prob.head)) {
            int lo = static_cast<int>(std::ceil(r.lo_mw / res - 1e-9));
            int hi = static_cast<int>(std::floor(r.hi_mw / res + 1e-9));
            for (int m = std::max(0, lo); m <= hi; ++m) {
                double p = m * res;
                cand_p[i].push_back(p);
                cand_v[i].push_back(p > 0 ? efficiency(prob.units[i], {p / p_max, h_hat}) * p : 0.0);
            }
        }
    }
    OracleBest feasible, nearest;
    double nearest_dist = std::numeric_limits<double>::infinity();
    std::vector<int> pick(n, 0);
    std::function<void(int, double, double)> recurse = [&](int i, double total, double value) {
        if (i == n) {
            double dist = std::abs(total - prob.target_mw);
            double eff = total > 0 ? value / total : 0.0;
            if (dist <= res + 1e-9) {
                double best_eff = feasible.total > 0 ? feasible.objective / feasible.total : 0.0;
                double best_dist = std::abs(feasible.total - prob.target_mw);
                if (feasible.objective < 0 || dist < best_dist ||
                    (dist == best_dist && eff > best_eff))
                    feasible = {value, total};
            }
            if (dist < nearest_dist) {
                nearest_dist = dist;
                nearest = {value, total};
            } else if (dist == nearest_dist) {
                double eff_near = nearest.total > 0 ? nearest.objective / nearest.total : 0.0;
                if (eff > eff_near) nearest = {value, total};
            }
            return;
        }
        for (size_t k = 0; k < cand_p[i].size(); ++k)
            recurse(i + 1, total + cand_p[i][k], value + cand_v[i][k]);
    };
    recurse(0, 0.0, 0.0);
    return feasible.objective >= 0 ? feasible : nearest;
}

Criterion rough_zone_dispatch() {
    Criterion c;
    std::mt19937 rng(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int oracle_checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        PlantDispatchProblem prob;
        int n = 1 + static_cast<int>(u(rng) * 6.0);
        if (n > 6) n = 6;
        for (int i = 0; i < n; ++i) {
            TurbineUnit unit = TurbineUnit::defaults_for(TurbineType::Francis);
            unit.name = "u" + std::to_string(i);
            unit.rated_power_mw = 20.0 + 100.0 * u(rng);
            unit.rated_head = Length::meters(100.0);
            unit.min_load_frac = 0.05 + 0.1 * u(rng);
            unit.max_load_frac = 1.0;
            double lo = unit.min_load_frac + 0.1 + 0.3 * u(rng);
            double hi = std::min(lo + 0.05 + 0.25 * u(rng), 0.95);
            unit.forbidden_bands = {{lo, hi}};
            prob.units.push_back(unit);
        }
        prob.head = Length::meters(60.0 + 50.0 * u(rng));
        prob.target_mw = u(rng) * n * 130.0;
        prob.resolution_mw = 2.0;

        DispatchSolution sol = dispatch_plant(prob);

        for (int i = 0; i < n; ++i) {
            if (!sol.committed[i]) continue;
            double p_max =
                derate_max_power(prob.units[i].rated_power_mw, prob.head, prob.units[i].rated_head);
            for (const auto& [lo, hi] : prob.units[i].forbidden_bands) {
                if (sol.setpoints_mw[i] > lo * p_max + 1e-9 &&
                    sol.setpoints_mw[i] < hi * p_max - 1e-9) {
                    c.require(false, "trial " + std::to_string(trial) + ": setpoint " +
                                         fmt(sol.setpoints_mw[i]) + " inside band of unit " +
                                         std::to_string(i));
                    return c;
                }
            }
        }
        if (n <= 3) {
            OracleBest oracle = brute_oracle(prob);
            double oracle_eff = oracle.total > 0 ? oracle.objective / oracle.total : 0.0;
            if (sol.plant_efficiency != oracle_eff) {
                c.require(false, "trial " + std::to_string(trial) + ": efficiency " +
                                     fmt(sol.plant_efficiency) + " != oracle " + fmt(oracle_eff));
                return c;
            }
            ++oracle_checked;
        }
    }
    c.detail = "1000 instances band-safe; " + std::to_string(oracle_checked) +
               " small instances match the exhaustive oracle exactly";
    return c;
}

// --- criterion 7: inertia split ------------------------------------------

Criterion inertia_split() {
    Criterion c;
    auto unit = [] {
        TurbineUnit u = TurbineUnit::defaults_for(TurbineType::Francis);
        u.rated_power_mw = 100.0;
        u.mva_rating = 125.0;
        u.inertia_h_s = 3.5;
        return u;
    }();

    auto grid_with = [&](int online, double p0_mw) {
        GridModel grid;
        grid.system_base_mva = 500.0;
        grid.load_damping_d = 1.0;
        for (int i = 0; i < online; ++i) {
            ResponsiveUnit r;
            r.unit = unit;
            r.initial_power_pu = p0_mw / unit.mva_rating;
            r.initial_head_pu = 1.0;
            grid.responsive_units.push_back(r);
        }
        return grid;
    };

    std::vector<std::pair<TurbineUnit, bool>> four, one;
    for (int i = 0; i < 4; ++i) four.emplace_back(unit, true);
    one.emplace_back(unit, true);
    double e4 = aggregate_stored_energy(four);
    double e1 = aggregate_stored_energy(one);
    c.require(e4 == 4.0 * e1, "stored energy ratio " + fmt(e4 / e1) + " != 4");

    GenerationLossEvent event{1.0, 40.0};
    FrequencySimResult many = simulate_event(grid_with(4, 25.0), event, 20.0, 0.01);
    FrequencySimResult single = simulate_event(grid_with(1, 100.0), event, 20.0, 0.01);
    c.require(std::abs(many.metrics.rocof_hz_per_s) < std::abs(single.metrics.rocof_hz_per_s),
              "RoCoF " + fmt(many.metrics.rocof_hz_per_s) + " not smaller than " +
                  fmt(single.metrics.rocof_hz_per_s));
    if (c.pass)
        c.detail = "stored energy 4x (" + fmt(e4) + " vs " + fmt(e1) + " MWs); RoCoF " +
                   fmt(many.metrics.rocof_hz_per_s) + " vs " + fmt(single.metrics.rocof_hz_per_s) +
                   " Hz/s";
    return c;
}

// --- criterion 8: water conservation --------------------------------------

Criterion water_conservation() {
    Criterion c;
    BasinNetwork net;
    for (int i = 0; i < 5; ++i) {
        BasinNode n;
        n.node_id = "n" + std::to_string(i);
        if (i % 2 == 0) {
            n.kind = NodeKind::Reservoir;
            n.storage_elevation_table = {{0.0, 50.0}, {5e8, 90.0}};
            n.min_storage_m3 = 0.0;
            n.max_storage_m3 = 5e8;
            n.initial_storage_m3 = 2.5e8;
        } else {
            n.kind = NodeKind::RunOfRiver;
            TurbineUnit u = TurbineUnit::defaults_for(TurbineType::Kaplan);
            u.rated_flow_m3s = 4000.0;
            n.plant.push_back(u);
        }
        net.nodes.push_back(n);
        if (i > 0)
            net.reaches.push_back({"n" + std::to_string(i - 1), "n" + std::to_string(i),
                                   i * 3600.0});
    }

    const int horizon = 10000;
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    NodeSeries lateral, releases;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> v(horizon);
        for (auto& x : v) x = u(rng);
        lateral["n" + std::to_string(i)] = v;
    }
    for (int i = 0; i < 5; i += 2) {
        std::vector<double> v(horizon);
        for (auto& x : v) x = 0.5 * u(rng);
        releases["n" + std::to_string(i)] = v;
    }

    BasinState st = route_water(net, lateral, releases, 3600.0, horizon);

    double in_total = 0.0;
    for (const auto& [id, series] : lateral)
        for (double v : series) in_total += v * st.dt_s;
    double out_total = 0.0;
    for (int t = 0; t < horizon; ++t) out_total += st.outflow_m3s[4][t] * st.dt_s;
    double storage_delta = 0.0;
    for (int i = 0; i < 5; ++i)
        if (!st.storage_m3[i].empty())
            storage_delta += st.storage_m3[i][horizon] - st.storage_m3[i][0];
    double transit_delta = 0.0;
    for (const auto& r : net.reaches) {
        int from = net.node_index(r.from_node);
        int lag = static_cast<int>(std::llround(r.travel_time_s / st.dt_s));
        for (int j = 1; j <= lag; ++j)
            transit_delta +=
                (st.outflow_m3s[from][horizon - j] - st.outflow_m3s[from][0]) * st.dt_s;
    }
    double defect = in_total - out_total - storage_delta - transit_delta;
    c.require(std::abs(defect) <= 1e-9 * in_total,
              "conservation defect " + fmt(defect) + " m3 over " + fmt(in_total) + " m3");
    if (c.pass)
        c.detail = "defect " + fmt(std::abs(defect) / in_total) + " relative over 10,000 steps";
    return c;
}

// --- criterion 9: calibrated two-area response -----------------------------

Criterion two_area_response(const std::string& scenario_dir) {
    Criterion c;
    Scenario scenario = load_scenario(scenario_dir + "/two_area.json");
    FrequencySimResult r = simulate_event(scenario.build_grid_model(), scenario.event,
                                          scenario.solver.duration_s, scenario.solver.dt_s);
    double response = r.metrics.delivered_response_mw;
    c.require(response >= 350.0 && response <= 450.0,
              "delivered response " + fmt(response) + " MW outside [350, 450]");
    c.require(scenario.event.loss_mw == 680.0, "shipped event is not the 680 MW loss");
    if (c.pass)
        c.detail = fmt(response) + " MW of response for a 680 MW loss (nadir " +
                   fmt(r.metrics.nadir_hz) + " Hz)";
    return c;
}

// --- criterion 10: ride-through contrast -----------------------------------

Criterion ridethrough_contrast() {
    Criterion c;
    std::vector<double> trace;
    for (double t = 0; t < 2.0; t += 0.01) trace.push_back(60.0);
    for (double t = 0; t < 5.0; t += 0.01) trace.push_back(57.0);
    for (double t = 0; t < 3.0; t += 0.01) trace.push_back(60.0);

    std::vector<std::pair<std::string, FleetClass>> fleet;
    for (int i = 0; i < 5; ++i) fleet.emplace_back("steam" + std::to_string(i), FleetClass::Steam);
    for (int i = 0; i < 5; ++i) fleet.emplace_back("hydro" + std::to_string(i), FleetClass::Hydro);

    TripReport report = evaluate_ridethrough(trace, 0.01, fleet, default_envelopes());
    int steam_tripped = report.tripped_by_class.count(FleetClass::Steam)
                            ? report.tripped_by_class.at(FleetClass::Steam)
                            : 0;
    int hydro_tripped = report.tripped_by_class.count(FleetClass::Hydro)
                            ? report.tripped_by_class.at(FleetClass::Hydro)
                            : 0;
    c.require(steam_tripped == 5, "only " + std::to_string(steam_tripped) + "/5 steam units tripped");
    c.require(hydro_tripped == 0, std::to_string(hydro_tripped) + " hydro units tripped");
    if (c.pass) c.detail = "57 Hz / 5 s dip: steam 5/5 tripped, hydro 0/5";
    return c;
}

} // namespace

int main() {
    const std::string scenario_dir = HYDROSIM_SCENARIO_DIR;
    struct Entry {
        const char* name;
        std::function<Criterion()> run;
        double budget_ms;
    };
    const Entry entries[] = {
        {"Grand Coulee derating", grand_coulee_derating, 1.0},
        {"non-minimum phase", non_minimum_phase, 1000.0},
        {"droop equilibrium", droop_equilibrium, 10000.0},
        {"head-blindness contrast", head_blindness, 0.0},
        {"low-head response limitation",
         [&] { return low_head_response(scenario_dir); }, 0.0},
        {"rough-zone safety and optimality", rough_zone_dispatch, 60000.0},
        {"inertia split", inertia_split, 0.0},
        {"water conservation", water_conservation, 1000.0},
        {"two-area calibrated response",
         [&] { return two_area_response(scenario_dir); }, 0.0},
        {"ride-through contrast", ridethrough_contrast, 0.0},
    };

    int failures = 0;
    int index = 0;
    for (const auto& entry : entries) {
        ++index;
        auto t0 = Clock::now();
        Criterion result;
        try {
            result = entry.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        double elapsed = ms_since(t0);
        if (result.pass && entry.budget_ms > 0 && elapsed >= entry.budget_ms) {
            result.pass = false;
            result.detail = "runtime " + fmt(elapsed) + " ms over budget " +
                            fmt(entry.budget_ms) + " ms";
        }
        std::printf("%s  criterion %2d: %s — %s (%.1f ms)\n", result.pass ? "PASS" : "FAIL",
                    index, entry.name, result.detail.c_str(), elapsed);
        if (!result.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all 10 criteria passed\n");
    return failures;
}
