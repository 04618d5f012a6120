#include "hydrosim/study.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hydrosim/errors.hpp"
#include "hydrosim/hydro_physics.hpp"
#include "hydrosim/log.hpp"
#include "hydrosim/telemetry.hpp"

namespace hydrosim {

namespace {

double plant_capacity_at(const BasinNode& node, Length head) {
    double cap = 0.0;
    for (const auto& u : node.plant) cap += derate_max_power(u.rated_power_mw, head, u.rated_head);
    return cap;
}

std::string bool_field(bool v) { return v ? "1" : "0"; }

} // namespace

DerateStudy run_derate_study(const Scenario& scenario) {
    DerateStudy study;
    study.table.header = {"node_id", "sample", "timestamp", "head_m", "capacity_mw"};
    for (size_t i = 0; i < scenario.network.nodes.size(); ++i) {
        const BasinNode& node = scenario.network.nodes[i];
        if (node.plant.empty()) continue;
        if (!scenario.water.forebay_csv.empty() && scenario.water.csv_node_id == node.node_id) {
            TelemetrySeries series = ingest_forebay_csv(
                scenario.water.forebay_csv,
                Length{scenario.water.tailwater_default, scenario.water.csv_unit});
            for (size_t t = 0; t < series.size(); ++t) {
                Length head{series.head[t], series.unit};
                study.table.add_row({node.node_id, std::to_string(t), series.timestamps[t],
                                     format_float(head.in_meters()),
                                     format_float(plant_capacity_at(node, head))});
            }
        } else {
            Length head = scenario.plant_head(static_cast<int>(i));
            study.table.add_row({node.node_id, "0", "", format_float(head.in_meters()),
                                 format_float(plant_capacity_at(node, head))});
        }
    }
    return study;
}

RouteStudy run_route_study(const Scenario& scenario) {
    if (scenario.water.routing_horizon <= 0)
        throw ValidationError("route study needs water.inflows_m3s (and routing_horizon)");
    RouteStudy study;
    study.state = route_water(scenario.network, scenario.water.inflows_m3s,
                              scenario.water.releases_m3s, scenario.solver.routing_dt_s,
                              scenario.water.routing_horizon);

    // Generation implied by the turbined share of each release at routed head.
    const auto& state = study.state;
    for (size_t i = 0; i < scenario.network.nodes.size(); ++i) {
        const BasinNode& node = scenario.network.nodes[i];
        std::vector<double> gen(state.horizon, 0.0);
        double plant_flow = node.plant_rated_flow_m3s();
        for (int t = 0; t < state.horizon; ++t) {
            double turbined = std::min(state.release_m3s[i][t], plant_flow);
            double head_m = state.head_m[i][t];
            if (turbined <= 0 || head_m <= 0 || node.plant.empty()) continue;
            double p = 0.0;
            for (const auto& u : node.plant) {
                double q_u = turbined * u.rated_flow_m3s / plant_flow;
                EfficiencyQuery query{q_u / u.rated_flow_m3s, head_m / u.rated_head.in_meters()};
                p += mechanical_power(q_u, Length::meters(head_m), efficiency(u, query));
            }
            gen[t] = p;
        }
        study.implied_generation_mw[node.node_id] = std::move(gen);
    }

    study.violations = check_constraints(scenario.network, state, study.implied_generation_mw);

    study.state_csv.header = {"step", "node_id", "inflow_m3s", "release_m3s", "spill_m3s",
                              "outflow_m3s", "storage_m3", "head_m", "generation_mw"};
    for (int t = 0; t < state.horizon; ++t) {
        for (size_t i = 0; i < scenario.network.nodes.size(); ++i) {
            const std::string& id = scenario.network.nodes[i].node_id;
            double storage = state.storage_m3[i].empty() ? 0.0 : state.storage_m3[i][t + 1];
            study.state_csv.add_row(
                {std::to_string(t), id, format_float(state.inflow_m3s[i][t]),
                 format_float(state.release_m3s[i][t]), format_float(state.spill_m3s[i][t]),
                 format_float(state.outflow_m3s[i][t]), format_float(storage),
                 format_float(state.head_m[i][t]),
                 format_float(study.implied_generation_mw[id][t])});
        }
    }
    study.violations_csv.header = {"node_id", "step", "kind"};
    for (const auto& v : study.violations)
        study.violations_csv.add_row({v.node_id, std::to_string(v.step), to_string(v.kind)});
    return study;
}

SimulateStudy run_simulate_study(const Scenario& scenario, TurbineModelKind model) {
    SimulateStudy study;
    GridModel grid = scenario.build_grid_model();
    for (size_t i = 0; i < scenario.network.nodes.size(); ++i)
        for (size_t j = 0; j < scenario.network.nodes[i].plant.size(); ++j)
            if (scenario.initial_power_mw[i][j] >= 0)
                study.unit_labels.push_back(scenario.network.nodes[i].node_id + "." +
                                            scenario.network.nodes[i].plant[j].name);

    study.result = simulate_event(grid, scenario.event, scenario.solver.duration_s,
                                  scenario.solver.dt_s, model);

    study.series_csv.header = {"time_s", "frequency_hz"};
    for (const auto& label : study.unit_labels)
        for (const char* field : {"gate_pu", "flow_pu", "head_pu", "pm_pu"})
            study.series_csv.header.push_back(label + "." + field);
    const auto& r = study.result;
    for (size_t t = 0; t < r.time_s.size(); ++t) {
        std::vector<std::string> row{format_float(r.time_s[t]), format_float(r.frequency_hz[t])};
        for (size_t u = 0; u < study.unit_labels.size(); ++u) {
            row.push_back(format_float(r.gate_pu[u][t]));
            row.push_back(format_float(r.flow_pu[u][t]));
            row.push_back(format_float(r.head_pu[u][t]));
            row.push_back(format_float(r.pm_pu[u][t]));
        }
        study.series_csv.add_row(std::move(row));
    }

    std::ostringstream metrics;
    metrics << "model=" << (model == TurbineModelKind::Nonlinear ? "nonlinear" : "linearized")
            << "\n"
            << "rocof_hz_per_s=" << format_float(r.metrics.rocof_hz_per_s) << "\n"
            << "nadir_hz=" << format_float(r.metrics.nadir_hz) << "\n"
            << "nadir_time_s=" << format_float(r.metrics.nadir_time_s) << "\n"
            << "settling_deviation_hz=" << format_float(r.metrics.settling_deviation_hz) << "\n"
            << "delivered_response_mw=" << format_float(r.metrics.delivered_response_mw) << "\n"
            << "ufls_shed_mw=" << format_float(r.metrics.ufls_shed_mw) << "\n"
            << "frequency_collapse=" << bool_field(r.metrics.frequency_collapse) << "\n";
    study.metrics_text = metrics.str();
    return study;
}

DispatchStudy run_dispatch_study(const Scenario& scenario, double system_target_mw) {
    DispatchStudy study;
    std::vector<std::pair<BasinNode, Length>> plants;
    for (size_t i = 0; i < scenario.network.nodes.size(); ++i)
        if (!scenario.network.nodes[i].plant.empty())
            plants.emplace_back(scenario.network.nodes[i],
                                scenario.plant_head(static_cast<int>(i)));
    if (plants.empty()) throw ValidationError("dispatch study needs at least one plant with units");

    study.fleet = fleet_dispatch(plants, system_target_mw, scenario.solver.resolution_mw);

    study.table.header = {"node_id", "unit",       "committed",        "setpoint_mw",
                          "plant_total_mw", "plant_target_mw", "plant_efficiency", "feasible"};
    for (size_t p = 0; p < plants.size(); ++p) {
        const auto& sol = study.fleet.plants[p];
        const auto& units = plants[p].first.plant;
        for (size_t u = 0; u < units.size(); ++u) {
            study.table.add_row({study.fleet.plant_ids[p], units[u].name,
                                 bool_field(sol.committed[u]), format_float(sol.setpoints_mw[u]),
                                 format_float(sol.total_mw),
                                 format_float(study.fleet.plant_targets_mw[p]),
                                 format_float(sol.plant_efficiency), bool_field(sol.feasible)});
        }
    }
    return study;
}

RidethroughStudy run_ridethrough_study(const Scenario& scenario,
                                       const std::vector<double>& frequency_hz, double dt_s) {
    RidethroughStudy study;
    std::vector<std::pair<std::string, FleetClass>> fleet = scenario.protection_fleet;
    if (fleet.empty()) {
        // Default fleet: every hydro unit in the scenario, hydro class.
        for (const auto& node : scenario.network.nodes)
            for (const auto& u : node.plant)
                fleet.emplace_back(node.node_id + "." + u.name, FleetClass::Hydro);
    }
    study.report = evaluate_ridethrough(frequency_hz, dt_s, fleet, scenario.envelopes);

    study.table.header = {"generator_id", "fleet_class", "tripped", "trip_time_s", "violated_band"};
    for (const auto& g : study.report.per_generator)
        study.table.add_row({g.generator_id, to_string(g.fleet_class), bool_field(g.tripped),
                             g.tripped ? format_float(g.trip_time_s) : "",
                             g.tripped ? std::to_string(g.violated_band) : ""});
    return study;
}

std::pair<std::vector<double>, double> load_frequency_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    int t_col = -1, f_col = -1;
    for (size_t c = 0; c < table.header.size(); ++c) {
        if (table.header[c] == "time_s") t_col = static_cast<int>(c);
        if (table.header[c] == "frequency_hz") f_col = static_cast<int>(c);
    }
    if (t_col < 0 || f_col < 0)
        throw ParseError("'" + path + "': need columns time_s and frequency_hz");
    if (table.rows.size() < 2)
        throw EmptySeriesError("'" + path + "': need at least two samples");

    std::vector<double> freq;
    std::vector<double> time;
    for (const auto& row : table.rows) {
        time.push_back(std::stod(row[t_col]));
        freq.push_back(std::stod(row[f_col]));
    }
    double dt = time[1] - time[0];
    if (dt <= 0) throw ParseError("'" + path + "': time column must be increasing");
    for (size_t i = 1; i < time.size(); ++i)
        if (std::abs(time[i] - time[i - 1] - dt) > 1e-6 * std::max(1.0, dt))
            throw ParseError("'" + path + "': time column must be uniformly spaced");
    return {freq, dt};
}

bool run_report(const Scenario& scenario, const std::string& out_dir) {
    bool clean = true;
    std::ostringstream summary;
    summary << "scenario=" << scenario.name << "\n";

    DerateStudy derate = run_derate_study(scenario);
    write_file_atomic(out_dir + "/derate.csv", derate.table.to_string());

    if (scenario.water.routing_horizon > 0) {
        RouteStudy route = run_route_study(scenario);
        write_file_atomic(out_dir + "/route_state.csv", route.state_csv.to_string());
        write_file_atomic(out_dir + "/route_violations.csv", route.violations_csv.to_string());
        summary << "route_violations=" << route.violations.size() << "\n";
        if (!route.violations.empty()) clean = false;
    }

    bool has_online = false;
    for (const auto& per_node : scenario.initial_power_mw)
        for (double p : per_node)
            if (p >= 0) has_online = true;

    std::vector<double> nonlinear_trace;
    double trace_dt = scenario.solver.dt_s;
    if (has_online) {
        for (TurbineModelKind model :
             {TurbineModelKind::Nonlinear, TurbineModelKind::Linearized}) {
            const char* tag = model == TurbineModelKind::Nonlinear ? "nonlinear" : "linearized";
            SimulateStudy sim = run_simulate_study(scenario, model);
            write_file_atomic(out_dir + "/simulate_" + tag + ".csv", sim.series_csv.to_string());
            write_file_atomic(out_dir + "/simulate_" + tag + "_metrics.txt", sim.metrics_text);
            summary << "simulate_" << tag
                    << "_nadir_hz=" << format_float(sim.result.metrics.nadir_hz) << "\n"
                    << "simulate_" << tag << "_delivered_response_mw="
                    << format_float(sim.result.metrics.delivered_response_mw) << "\n";
            if (sim.result.metrics.frequency_collapse) clean = false;
            if (model == TurbineModelKind::Nonlinear) nonlinear_trace = sim.result.frequency_hz;
        }

        RidethroughStudy ride = run_ridethrough_study(scenario, nonlinear_trace, trace_dt);
        write_file_atomic(out_dir + "/ridethrough.csv", ride.table.to_string());
        int tripped = 0;
        for (const auto& g : ride.report.per_generator) tripped += g.tripped ? 1 : 0;
        summary << "ridethrough_trips=" << tripped << "\n";
        if (tripped > 0) clean = false;
    }

    if (scenario.dispatch_target_mw) {
        DispatchStudy dispatch = run_dispatch_study(scenario, *scenario.dispatch_target_mw);
        write_file_atomic(out_dir + "/dispatch.csv", dispatch.table.to_string());
        summary << "dispatch_unserved_mw=" << format_float(dispatch.fleet.unserved_mw) << "\n";
        if (dispatch.fleet.unserved_mw > scenario.solver.resolution_mw) clean = false;
        for (const auto& sol : dispatch.fleet.plants)
            if (!sol.feasible) clean = false;
    }

    summary << "clean=" << bool_field(clean) << "\n";
    write_file_atomic(out_dir + "/summary.txt", summary.str());
    log_info("report bundle written to " + out_dir);
    return clean;
}

} // namespace hydrosim
