#include "hydrosim/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hydrosim/errors.hpp"
#include "hydrosim/hydro_physics.hpp"

namespace hydrosim {

std::vector<MwInterval> feasible_ranges(const TurbineUnit& unit, Length head) {
    if (head.value < 0) throw PreconditionError("head must be >= 0");
    double p_max = derate_max_power(unit.rated_power_mw, head, unit.rated_head);
    if (p_max <= 0) return {};

    std::vector<MwInterval> ranges;
    double lo = unit.min_load_frac * p_max;
    double hi = unit.max_load_frac * p_max;
    for (const auto& [band_lo, band_hi] : unit.forbidden_bands) {
        double b_lo = band_lo * p_max;
        double b_hi = band_hi * p_max;
        if (b_lo > lo) ranges.push_back({lo, b_lo});
        lo = std::max(lo, b_hi);
    }
    if (lo < hi) ranges.push_back({lo, hi});
    return ranges;
}

namespace {

struct DpCell {
    double value = -std::numeric_limits<double>::infinity();  // max sum of eta*p
    int count = 0;                                            // min committed at that value
    bool reachable = false;
};

// Grid candidates and efficiency-weighted values for one unit.
struct UnitGrid {
    std::vector<int> steps;     // candidate setpoints as grid indices (MW / resolution)
    std::vector<double> value;  // eta(p) * p per candidate
};

double setpoint_value(const TurbineUnit& unit, double p_mw, double p_max_mw, double h_hat) {
    if (p_mw <= 0 || p_max_mw <= 0) return 0.0;
    EfficiencyQuery query{p_mw / p_max_mw, h_hat};
    return efficiency(unit, query) * p_mw;
}

UnitGrid build_grid(const TurbineUnit& unit, Length head, double resolution_mw) {
    UnitGrid grid;
    double p_max = derate_max_power(unit.rated_power_mw, head, unit.rated_head);
    double h_hat = head.in_meters() / unit.rated_head.in_meters();
    for (const auto& range : feasible_ranges(unit, head)) {
        int m_lo = static_cast<int>(std::ceil(range.lo_mw / resolution_mw - 1e-9));
        int m_hi = static_cast<int>(std::floor(range.hi_mw / resolution_mw + 1e-9));
        for (int m = std::max(0, m_lo); m <= m_hi; ++m) {
            grid.steps.push_back(m);
            grid.value.push_back(setpoint_value(unit, m * resolution_mw, p_max, h_hat));
        }
    }
    return grid;
}

struct Candidate {
    int total_steps = 0;
    double total_mw = 0.0;
    double objective = 0.0;  // sum of eta*p
    int count = 0;
    std::vector<bool> committed;
    std::vector<double> setpoints;
};

// Selection order: target distance, efficiency, unit count, committed set,
// setpoint vector (all ascending except efficiency).
bool better(const Candidate& a, const Candidate& b, double target_mw) {
    double da = std::abs(a.total_mw - target_mw);
    double db = std::abs(b.total_mw - target_mw);
    if (da != db) return da < db;
    double ea = a.total_mw > 0 ? a.objective / a.total_mw : 0.0;
    double eb = b.total_mw > 0 ? b.objective / b.total_mw : 0.0;
    if (ea != eb) return ea > eb;
    if (a.count != b.count) return a.count < b.count;
    if (a.committed != b.committed) {
        // Lexicographically smallest committed index set: the set whose first
        // differing unit is committed wins.
        for (size_t i = 0; i < a.committed.size(); ++i)
            if (a.committed[i] != b.committed[i]) return a.committed[i];
    }
    return a.setpoints < b.setpoints;
}

} // namespace

DispatchSolution dispatch_plant(const PlantDispatchProblem& problem) {
    if (problem.units.empty()) throw PreconditionError("dispatch needs at least one unit");
    if (problem.target_mw < 0) throw PreconditionError("target must be >= 0");
    if (problem.resolution_mw <= 0) throw PreconditionError("resolution must be > 0");
    for (const auto& u : problem.units) u.validate();

    const int n = static_cast<int>(problem.units.size());
    const double res = problem.resolution_mw;

    std::vector<UnitGrid> grids(n);
    long long max_steps = 0;
    for (int i = 0; i < n; ++i) {
        grids[i] = build_grid(problem.units[i], problem.head, res);
        if (!grids[i].steps.empty()) max_steps += grids[i].steps.back();
    }
    if (max_steps > 400000)
        throw PreconditionError("dispatch grid too large (" + std::to_string(max_steps) +
                                " steps); raise resolution_mw");
    const int m_max = static_cast<int>(max_steps);

    // suffix[i][m]: best (max sum eta*p, min committed units) over units
    // i..n-1 producing exactly m grid steps.
    std::vector<std::vector<DpCell>> suffix(n + 1, std::vector<DpCell>(m_max + 1));
    suffix[n][0] = {0.0, 0, true};
    for (int i = n - 1; i >= 0; --i) {
        for (int m = 0; m <= m_max; ++m) {
            // Off is always available.
            DpCell best = suffix[i + 1][m];
            const auto& g = grids[i];
            for (size_t c = 0; c < g.steps.size(); ++c) {
                int rest = m - g.steps[c];
                if (rest < 0) continue;
                const DpCell& tail = suffix[i + 1][rest];
                if (!tail.reachable) continue;
                double v = g.value[c] + tail.value;
                int cnt = 1 + tail.count;
                if (!best.reachable || v > best.value ||
                    (v == best.value && cnt < best.count)) {
                    best = {v, cnt, true};
                }
            }
            suffix[i][m] = best;
        }
    }

    // Forward reconstruction at a fixed total, preferring a committed unit
    // (smallest setpoint first) over off whenever both stay on the optimal
    // (value, count) path. Recomputed sums match the DP bitwise because the
    // same operands are added in the same order.
    auto reconstruct = [&](int m_total) {
        Candidate cand;
        cand.total_steps = m_total;
        cand.committed.assign(n, false);
        cand.setpoints.assign(n, 0.0);
        int m = m_total;
        for (int i = 0; i < n; ++i) {
            const DpCell& need = suffix[i][m];
            bool placed = false;
            const auto& g = grids[i];
            for (size_t c = 0; c < g.steps.size() && !placed; ++c) {
                int rest = m - g.steps[c];
                if (rest < 0) continue;
                const DpCell& tail = suffix[i + 1][rest];
                if (!tail.reachable) continue;
                if (g.value[c] + tail.value == need.value && 1 + tail.count == need.count) {
                    cand.committed[i] = true;
                    cand.setpoints[i] = g.steps[c] * res;
                    cand.count += 1;
                    m = rest;
                    placed = true;
                }
            }
            if (!placed) {
                // stays off; suffix[i+1][m] must carry the same cell
                continue;
            }
        }
        for (int i = 0; i < n; ++i) {
            cand.total_mw += cand.setpoints[i];
            double p_max = derate_max_power(problem.units[i].rated_power_mw, problem.head,
                                            problem.units[i].rated_head);
            double h_hat = problem.head.in_meters() / problem.units[i].rated_head.in_meters();
            cand.objective += setpoint_value(problem.units[i], cand.setpoints[i], p_max, h_hat);
        }
        return cand;
    };

    int window_lo = std::max(0, static_cast<int>(std::ceil((problem.target_mw - res) / res - 1e-9)));
    int window_hi = std::min(m_max, static_cast<int>(std::floor((problem.target_mw + res) / res + 1e-9)));

    std::vector<int> totals;
    bool feasible = false;
    for (int m = window_lo; m <= window_hi; ++m) {
        if (suffix[0][m].reachable) {
            totals.push_back(m);
            feasible = true;
        }
    }
    if (!feasible) {
        // Nearest achievable totals (at most one below and one above target).
        double best_dist = std::numeric_limits<double>::infinity();
        for (int m = 0; m <= m_max; ++m) {
            if (!suffix[0][m].reachable) continue;
            double d = std::abs(m * res - problem.target_mw);
            if (d < best_dist - 1e-12) {
                best_dist = d;
                totals.clear();
            }
            if (d <= best_dist + 1e-12) totals.push_back(m);
        }
    }

    Candidate best;
    bool have = false;
    for (int m : totals) {
        Candidate c = reconstruct(m);
        if (!have || better(c, best, problem.target_mw)) {
            best = std::move(c);
            have = true;
        }
    }

    DispatchSolution solution;
    solution.committed.assign(n, false);
    solution.setpoints_mw.assign(n, 0.0);
    if (have) {
        solution.committed = best.committed;
        solution.setpoints_mw = best.setpoints;
        solution.total_mw = best.total_mw;
        solution.plant_efficiency = best.total_mw > 0 ? best.objective / best.total_mw : 0.0;
        solution.feasible = feasible && std::abs(best.total_mw - problem.target_mw) <= res + 1e-9;
    }
    return solution;
}

FleetDispatchResult fleet_dispatch(const std::vector<std::pair<BasinNode, Length>>& plants,
                                   double system_target_mw, double resolution_mw) {
    if (system_target_mw < 0) throw PreconditionError("system target must be >= 0");
    FleetDispatchResult result;

    std::vector<double> capacity(plants.size(), 0.0);
    double total_capacity = 0.0;
    for (size_t i = 0; i < plants.size(); ++i) {
        const auto& [node, head] = plants[i];
        for (const auto& u : node.plant)
            capacity[i] += derate_max_power(u.rated_power_mw, head, u.rated_head);
        total_capacity += capacity[i];
        result.plant_ids.push_back(node.node_id);
    }

    result.plant_targets_mw.assign(plants.size(), 0.0);
    result.plants.resize(plants.size());

    auto solve = [&](size_t i, double target) {
        result.plant_targets_mw[i] = target;
        PlantDispatchProblem problem{plants[i].first.plant, plants[i].second, target, resolution_mw};
        result.plants[i] = dispatch_plant(problem);
    };

    double achieved = 0.0;
    for (size_t i = 0; i < plants.size(); ++i) {
        double target = total_capacity > 0 ? system_target_mw * capacity[i] / total_capacity : 0.0;
        solve(i, target);
        achieved += result.plants[i].total_mw;
    }

    // One reallocation pass: hand the shortfall to plants with headroom.
    double residual = system_target_mw - achieved;
    if (residual > resolution_mw) {
        double headroom_total = 0.0;
        std::vector<double> headroom(plants.size(), 0.0);
        for (size_t i = 0; i < plants.size(); ++i) {
            headroom[i] = std::max(0.0, capacity[i] - result.plants[i].total_mw);
            headroom_total += headroom[i];
        }
        if (headroom_total > 0) {
            achieved = 0.0;
            for (size_t i = 0; i < plants.size(); ++i) {
                if (headroom[i] > 0) {
                    solve(i, result.plants[i].total_mw + residual * headroom[i] / headroom_total);
                }
                achieved += result.plants[i].total_mw;
            }
        }
    }

    result.unserved_mw = std::max(0.0, system_target_mw - achieved);
    return result;
}

} // namespace hydrosim
