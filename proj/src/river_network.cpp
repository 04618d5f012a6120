#include "hydrosim/river_network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "hydrosim/errors.hpp"
#include "hydrosim/hydro_physics.hpp"

namespace hydrosim {

const char* to_string(NodeKind k) {
    return k == NodeKind::Reservoir ? "reservoir" : "run_of_river";
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "reservoir") return NodeKind::Reservoir;
    if (s == "run_of_river") return NodeKind::RunOfRiver;
    throw ValidationError("unknown node kind '" + s + "'");
}

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::MinFlow: return "MinFlow";
        case ViolationKind::MinGeneration: return "MinGeneration";
        default: return "StorageBound";
    }
}

void BasinNode::validate() const {
    auto fail = [this](const std::string& what) {
        throw ValidationError("node '" + node_id + "': " + what);
    };
    if (node_id.empty()) fail("node_id must be non-empty");
    if (min_environmental_flow_m3s < 0) fail("min_environmental_flow_m3s must be >= 0");
    if (min_generation_mw < 0) fail("min_generation_mw must be >= 0");

    if (kind == NodeKind::Reservoir) {
        if (storage_elevation_table.size() < 2)
            fail("reservoir needs a storage_elevation_table with at least 2 points");
        for (size_t i = 1; i < storage_elevation_table.size(); ++i) {
            if (storage_elevation_table[i].first <= storage_elevation_table[i - 1].first ||
                storage_elevation_table[i].second <= storage_elevation_table[i - 1].second)
                fail("storage_elevation_table must be strictly increasing in both coordinates");
        }
        if (!(min_storage_m3 < max_storage_m3)) fail("require min_storage < max_storage");
        if (storage_elevation_table.front().first > min_storage_m3 ||
            storage_elevation_table.back().first < max_storage_m3)
            fail("storage_elevation_table must span [min_storage, max_storage]");
        if (initial_storage_m3 < min_storage_m3 || initial_storage_m3 > max_storage_m3)
            fail("initial_storage must lie within [min_storage, max_storage]");
    } else {
        if (!storage_elevation_table.empty())
            fail("run-of-river nodes carry no storage_elevation_table");
    }
    for (const auto& u : plant) u.validate();
}

double BasinNode::plant_rated_flow_m3s() const {
    double q = 0.0;
    for (const auto& u : plant) q += u.rated_flow_m3s;
    return q;
}

double BasinNode::plant_rated_power_mw() const {
    double p = 0.0;
    for (const auto& u : plant) p += u.rated_power_mw;
    return p;
}

int BasinNetwork::node_index(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].node_id == id) return static_cast<int>(i);
    throw ValidationError("unknown node id '" + id + "'");
}

void BasinNetwork::validate() const {
    for (size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].validate();
        for (size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i].node_id == nodes[j].node_id)
                throw ValidationError("duplicate node id '" + nodes[i].node_id + "'");
    }
    std::vector<int> out_degree(nodes.size(), 0);
    for (const auto& r : reaches) {
        if (r.travel_time_s < 0)
            throw ValidationError("reach " + r.from_node + "->" + r.to_node +
                                  ": travel_time must be >= 0");
        int from = node_index(r.from_node);
        node_index(r.to_node);
        if (++out_degree[from] > 1)
            throw TopologyError("node '" + r.from_node +
                                "' has multiple outgoing reaches; flow splitting is not supported");
    }
    topological_order();
}

std::vector<int> BasinNetwork::topological_order() const {
    const int n = static_cast<int>(nodes.size());
    std::vector<int> in_degree(n, 0);
    std::vector<std::vector<int>> succ(n);
    for (const auto& r : reaches) {
        int from = node_index(r.from_node);
        int to = node_index(r.to_node);
        succ[from].push_back(to);
        ++in_degree[to];
    }
    std::deque<int> ready;
    for (int i = 0; i < n; ++i)
        if (in_degree[i] == 0) ready.push_back(i);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int i = ready.front();
        ready.pop_front();
        order.push_back(i);
        for (int j : succ[i])
            if (--in_degree[j] == 0) ready.push_back(j);
    }
    if (static_cast<int>(order.size()) != n)
        throw TopologyError("river graph contains a cycle");
    return order;
}

Length head_from_storage(const BasinNode& node, double storage_m3) {
    if (node.kind != NodeKind::Reservoir)
        throw PreconditionError("head_from_storage requires a reservoir node");
    const auto& table = node.storage_elevation_table;
    if (storage_m3 < table.front().first || storage_m3 > table.back().first)
        throw OutOfTableError("node '" + node.node_id + "': storage " + std::to_string(storage_m3) +
                              " m3 outside table span [" + std::to_string(table.front().first) +
                              ", " + std::to_string(table.back().first) + "]");
    auto it = std::upper_bound(table.begin(), table.end(), storage_m3,
                               [](double s, const auto& p) { return s < p.first; });
    if (it == table.begin()) ++it;
    if (it == table.end()) --it;
    const auto& [s1, e1] = *(it - 1);
    const auto& [s2, e2] = *it;
    double elev = e1 + (e2 - e1) * (storage_m3 - s1) / (s2 - s1);
    return Length{elev - node.tailwater_elevation, node.elevation_unit};
}

namespace {

const std::vector<double>* find_series(const NodeSeries& series, const std::string& id,
                                       int horizon, const char* what) {
    auto it = series.find(id);
    if (it == series.end()) return nullptr;
    if (static_cast<int>(it->second.size()) != horizon)
        throw PreconditionError(std::string(what) + " series for node '" + id + "' has " +
                                std::to_string(it->second.size()) + " samples, expected " +
                                std::to_string(horizon));
    return &it->second;
}

double run_of_river_head_m(const BasinNode& node) {
    if (node.forebay_elevation) {
        Length fb{*node.forebay_elevation, node.elevation_unit};
        Length tw{node.tailwater_elevation, node.elevation_unit};
        return compute_head(fb, tw).in_meters();
    }
    if (!node.plant.empty()) return node.plant.front().rated_head.in_meters();
    return 0.0;
}

} // namespace

BasinState route_water(const BasinNetwork& network, const NodeSeries& lateral_inflows_m3s,
                       const NodeSeries& releases_m3s, double dt_s, int horizon,
                       InTransitInit in_transit) {
    if (dt_s <= 0) throw PreconditionError("dt must be > 0");
    if (horizon <= 0) throw PreconditionError("horizon must be > 0");
    network.validate();

    const int n = static_cast<int>(network.nodes.size());
    std::vector<int> order = network.topological_order();

    // Reaches grouped by destination, lag in whole steps (rounded).
    struct InboundReach {
        int from;
        int lag_steps;
    };
    std::vector<std::vector<InboundReach>> inbound(n);
    for (const auto& r : network.reaches) {
        int from = network.node_index(r.from_node);
        int to = network.node_index(r.to_node);
        inbound[to].push_back({from, static_cast<int>(std::llround(r.travel_time_s / dt_s))});
    }

    std::vector<const std::vector<double>*> lateral(n), release_in(n);
    for (int i = 0; i < n; ++i) {
        lateral[i] = find_series(lateral_inflows_m3s, network.nodes[i].node_id, horizon, "inflow");
        release_in[i] = find_series(releases_m3s, network.nodes[i].node_id, horizon, "release");
    }

    BasinState state;
    state.dt_s = dt_s;
    state.horizon = horizon;
    state.inflow_m3s.assign(n, std::vector<double>(horizon, 0.0));
    state.release_m3s.assign(n, std::vector<double>(horizon, 0.0));
    state.spill_m3s.assign(n, std::vector<double>(horizon, 0.0));
    state.outflow_m3s.assign(n, std::vector<double>(horizon, 0.0));
    state.storage_m3.assign(n, {});
    state.head_m.assign(n, std::vector<double>(horizon, 0.0));
    for (int i = 0; i < n; ++i) {
        if (network.nodes[i].kind == NodeKind::Reservoir) {
            state.storage_m3[i].assign(horizon + 1, 0.0);
            state.storage_m3[i][0] = network.nodes[i].initial_storage_m3;
        }
    }

    for (int t = 0; t < horizon; ++t) {
        for (int i : order) {
            const BasinNode& node = network.nodes[i];

            double arriving = 0.0;
            for (const auto& rb : inbound[i]) {
                int src_step = t - rb.lag_steps;
                if (src_step >= 0) {
                    arriving += state.outflow_m3s[rb.from][src_step];
                } else if (in_transit == InTransitInit::SteadyPassThrough) {
                    // Reach pre-filled with the upstream node's first sample;
                    // valid here because topological order fills step 0
                    // upstream-first.
                    arriving += state.outflow_m3s[rb.from][0];
                }
            }
            double lat = lateral[i] ? (*lateral[i])[t] : 0.0;
            if (lat < 0) throw PreconditionError("negative lateral inflow at node '" +
                                                 node.node_id + "' step " + std::to_string(t));
            double inflow = arriving + lat;
            state.inflow_m3s[i][t] = inflow;

            if (node.kind == NodeKind::Reservoir) {
                double release = release_in[i] ? (*release_in[i])[t] : 0.0;
                if (release < 0) throw PreconditionError("negative release at node '" +
                                                         node.node_id + "' step " + std::to_string(t));
                double s = state.storage_m3[i][t];
                double s_after = s + (inflow - release) * dt_s;
                if (s_after < node.min_storage_m3 - 1e-9 * std::max(1.0, node.min_storage_m3))
                    throw StorageUnderflowError(
                        node.node_id, t,
                        "node '" + node.node_id + "' step " + std::to_string(t) +
                            ": release " + std::to_string(release) + " m3/s would drive storage to " +
                            std::to_string(s_after) + " m3, below min_storage " +
                            std::to_string(node.min_storage_m3));
                double spill = std::max(0.0, (s_after - node.max_storage_m3) / dt_s);
                state.storage_m3[i][t + 1] = s_after - spill * dt_s;
                state.release_m3s[i][t] = release;
                state.spill_m3s[i][t] = spill;
                state.outflow_m3s[i][t] = release + spill;
                state.head_m[i][t] = head_from_storage(node, s).in_meters();
            } else {
                double release = std::min(inflow, node.plant_rated_flow_m3s());
                state.release_m3s[i][t] = release;
                state.spill_m3s[i][t] = inflow - release;
                state.outflow_m3s[i][t] = inflow;
                state.head_m[i][t] = run_of_river_head_m(node);
            }
        }
    }
    return state;
}

std::vector<Violation> check_constraints(const BasinNetwork& network, const BasinState& state,
                                         const NodeSeries& generation_mw) {
    std::vector<Violation> violations;
    const int n = static_cast<int>(network.nodes.size());
    for (int i = 0; i < n; ++i) {
        const BasinNode& node = network.nodes[i];
        const std::vector<double>* gen =
            find_series(generation_mw, node.node_id, state.horizon, "generation");
        for (int t = 0; t < state.horizon; ++t) {
            if (state.release_m3s[i][t] + state.spill_m3s[i][t] < node.min_environmental_flow_m3s)
                violations.push_back({node.node_id, t, ViolationKind::MinFlow});
            double g = gen ? (*gen)[t] : 0.0;
            if (g < node.min_generation_mw)
                violations.push_back({node.node_id, t, ViolationKind::MinGeneration});
        }
        if (node.kind == NodeKind::Reservoir) {
            double tol = 1e-9 * std::max(1.0, node.max_storage_m3);
            for (int t = 0; t <= state.horizon; ++t) {
                double s = state.storage_m3[i][t];
                if (s < node.min_storage_m3 - tol || s > node.max_storage_m3 + tol)
                    violations.push_back(
                        {node.node_id, std::min(t, state.horizon - 1), ViolationKind::StorageBound});
            }
        }
    }
    return violations;
}

std::vector<std::vector<double>> available_capacity_series(const BasinNetwork& network,
                                                           const BasinState& state) {
    const int n = static_cast<int>(network.nodes.size());
    std::vector<std::vector<double>> capacity(n, std::vector<double>(state.horizon, 0.0));
    for (int i = 0; i < n; ++i) {
        const BasinNode& node = network.nodes[i];
        double plant_flow = node.plant_rated_flow_m3s();
        for (int t = 0; t < state.horizon; ++t) {
            double head_m = state.head_m[i][t];
            if (head_m <= 0 || node.plant.empty()) continue;
            Length head = Length::meters(head_m);
            double cap = 0.0;
            for (const auto& u : node.plant) {
                double derated = derate_max_power(u.rated_power_mw, head, u.rated_head);
                if (node.kind == NodeKind::RunOfRiver) {
                    // Water-limited: the unit cannot exceed the hydraulic power
                    // of its share of the instantaneous inflow.
                    double q_u = plant_flow > 0
                                     ? state.inflow_m3s[i][t] * (u.rated_flow_m3s / plant_flow)
                                     : 0.0;
                    EfficiencyQuery query{q_u / u.rated_flow_m3s,
                                          head_m / u.rated_head.in_meters()};
                    double hydraulic = mechanical_power(q_u, head, efficiency(u, query));
                    derated = std::min(derated, hydraulic);
                }
                cap += derated;
            }
            capacity[i][t] = cap;
        }
    }
    return capacity;
}

} // namespace hydrosim
