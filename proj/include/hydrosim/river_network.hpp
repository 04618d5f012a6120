#ifndef HYDROSIM_RIVER_NETWORK_HPP
#define HYDROSIM_RIVER_NETWORK_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hydrosim/turbine.hpp"
#include "hydrosim/units.hpp"

namespace hydrosim {

enum class NodeKind { Reservoir, RunOfRiver };

const char* to_string(NodeKind k);
NodeKind node_kind_from_string(const std::string& s);

/// One plant site on the river: a storage reservoir or a run-of-river
/// project with negligible storage. Elevations (table, tailwater, fixed
/// forebay) are in elevation_unit; storages in m3, flows in m3/s.
struct BasinNode {
    std::string node_id;
    NodeKind kind = NodeKind::RunOfRiver;

    // Reservoir only: (storage m3, forebay elevation) pairs, strictly
    // increasing in both coordinates, spanning [min_storage, max_storage].
    std::vector<std::pair<double, double>> storage_elevation_table;
    LengthUnit elevation_unit = LengthUnit::Meters;
    double tailwater_elevation = 0.0;

    double min_storage_m3 = 0.0;
    double max_storage_m3 = 0.0;
    double initial_storage_m3 = 0.0;

    double min_environmental_flow_m3s = 0.0;
    double min_generation_mw = 0.0;

    // Run-of-river: fixed forebay elevation; absent means head is taken at
    // the plant's rated head.
    std::optional<double> forebay_elevation;

    std::vector<TurbineUnit> plant;

    void validate() const;
    double plant_rated_flow_m3s() const;
    double plant_rated_power_mw() const;
};

/// Directed river reach with a travel-time lag; water released at the
/// upstream node arrives downstream round(travel_time/dt) steps later.
struct Reach {
    std::string from_node;
    std::string to_node;
    double travel_time_s = 0.0;
};

struct BasinNetwork {
    std::vector<BasinNode> nodes;
    std::vector<Reach> reaches;

    /// Node invariants plus graph shape: ids unique, reach endpoints exist,
    /// acyclic, and no flow splitting (out-degree <= 1 per node).
    void validate() const;
    /// Kahn topological order over node indices; TopologyError on a cycle.
    std::vector<int> topological_order() const;
    int node_index(const std::string& id) const;
};

/// Water in reaches before the first upstream release arrives: either the
/// steady pass-through of each node's first outflow sample, or empty reaches.
enum class InTransitInit { SteadyPassThrough, Zero };

/// Per-node time series keyed by node id.
using NodeSeries = std::map<std::string, std::vector<double>>;

/// Routed basin trajectories, indexed [node][step] in network node order.
/// storage_m3 carries horizon+1 samples (initial plus one per step).
struct BasinState {
    double dt_s = 0.0;
    int horizon = 0;
    std::vector<std::vector<double>> inflow_m3s;
    std::vector<std::vector<double>> release_m3s;
    std::vector<std::vector<double>> spill_m3s;
    std::vector<std::vector<double>> outflow_m3s;
    std::vector<std::vector<double>> storage_m3;
    std::vector<std::vector<double>> head_m;
};

/// Lag-and-mass-balance routing.
///
/// Reservoir nodes integrate S' = inflow - release - spill, spilling the
/// minimum that keeps S <= max_storage and failing with StorageUnderflowError
/// if the requested release would drive S below min_storage. Run-of-river
/// nodes pass inflow through (release up to plant rated flow, rest spilled).
/// Missing series entries are treated as zero; present series must have
/// exactly `horizon` samples.
BasinState route_water(const BasinNetwork& network, const NodeSeries& lateral_inflows_m3s,
                       const NodeSeries& releases_m3s, double dt_s, int horizon,
                       InTransitInit in_transit = InTransitInit::SteadyPassThrough);

enum class ViolationKind { MinFlow, MinGeneration, StorageBound };

const char* to_string(ViolationKind k);

struct Violation {
    std::string node_id;
    int step = 0;
    ViolationKind kind = ViolationKind::MinFlow;
};

/// Environmental / regulatory screening of a routed state: minimum
/// environmental flow (release + spill), minimum generation, storage bounds.
/// Empty result means feasible.
std::vector<Violation> check_constraints(const BasinNetwork& network, const BasinState& state,
                                         const NodeSeries& generation_mw = {});

/// Piecewise-linear forebay elevation from the storage table, minus
/// tailwater. Reservoir nodes only; OutOfTableError outside the table span.
Length head_from_storage(const BasinNode& node, double storage_m3);

/// Head-derated available capacity per node and step, in MW. Run-of-river
/// capacity is additionally capped by the hydraulic power of the
/// instantaneous inflow.
std::vector<std::vector<double>> available_capacity_series(const BasinNetwork& network,
                                                           const BasinState& state);

} // namespace hydrosim

#endif
