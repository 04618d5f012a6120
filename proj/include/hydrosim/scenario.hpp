#ifndef HYDROSIM_SCENARIO_HPP
#define HYDROSIM_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hydrosim/dynamics.hpp"
#include "hydrosim/protection.hpp"
#include "hydrosim/river_network.hpp"
#include "hydrosim/units.hpp"

namespace hydrosim {

struct SolverSettings {
    double dt_s = 0.01;
    double duration_s = 60.0;
    double resolution_mw = 0.5;
    double routing_dt_s = 3600.0;
};

/// Water availability for the study. Either a named condition (head scale
/// factor), or forebay telemetry for one node, optionally plus inline
/// routing series (lateral inflows and reservoir releases per node).
struct WaterCondition {
    std::string condition = "nominal";  // high | nominal | low
    std::string forebay_csv;            // resolved path; empty = none
    std::string csv_node_id;            // node the telemetry belongs to
    LengthUnit csv_unit = LengthUnit::Feet;
    double tailwater_default = 0.0;     // in csv_unit

    NodeSeries inflows_m3s;
    NodeSeries releases_m3s;
    int routing_horizon = 0;

    /// high -> 1.0, nominal -> 0.9, low -> 0.79 (the Grand Coulee-style
    /// 21% head decrease).
    double head_scale() const;
};

struct GridSettings {
    double system_base_mva = 1000.0;
    double f_nominal_hz = 60.0;
    double load_damping_d = 1.0;
    double nonresponsive_mw = 0.0;
    double nonresponsive_inertia_mws = 0.0;
    std::vector<UflsStage> ufls;
};

/// Declarative study description: basin network and fleet, water condition,
/// event, solver settings, protection envelopes.
struct Scenario {
    std::string name = "scenario";
    BasinNetwork network;

    // Parallel to network.nodes[i].plant[j].
    std::vector<std::vector<GovernorParams>> governors;
    std::vector<std::vector<double>> initial_power_mw;  // < 0 means offline
    std::vector<std::vector<std::optional<double>>> initial_head_pu;

    WaterCondition water;
    GridSettings grid;
    GenerationLossEvent event;
    SolverSettings solver;

    std::map<FleetClass, RideThroughEnvelope> envelopes;  // defaults if absent
    std::vector<std::pair<std::string, FleetClass>> protection_fleet;

    std::optional<double> dispatch_target_mw;

    /// Plant head under this scenario's water condition: the telemetry's
    /// last sample for the telemetry node, otherwise the (storage-table or
    /// fixed) head scaled by the named condition factor.
    Length plant_head(int node_index) const;

    /// Per-unit initial head for dynamics: explicit override if present,
    /// else plant head / rated head.
    double unit_initial_head_pu(int node_index, int unit_index) const;

    /// Single-bus grid model with every online unit as a responsive unit.
    GridModel build_grid_model() const;

    void validate() const;
};

/// Loads, validates, and normalizes a scenario file (JSON). Referenced files
/// are resolved relative to the scenario file and must exist. ParseError for
/// malformed JSON; ValidationError naming the violated invariant.
Scenario load_scenario(const std::string& path);

/// Normalized JSON emission (all defaults filled). load_scenario of the
/// emitted text reproduces the same normalized scenario.
std::string scenario_to_json(const Scenario& scenario);

} // namespace hydrosim

#endif
