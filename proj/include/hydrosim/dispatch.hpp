#ifndef HYDROSIM_DISPATCH_HPP
#define HYDROSIM_DISPATCH_HPP

#include <string>
#include <utility>
#include <vector>

#include "hydrosim/river_network.hpp"
#include "hydrosim/turbine.hpp"
#include "hydrosim/units.hpp"

namespace hydrosim {

struct MwInterval {
    double lo_mw = 0.0;
    double hi_mw = 0.0;
};

/// Allowed operating intervals of one unit at the given head: the derated
/// loading range [min_load_frac, max_load_frac] * P_derated minus every
/// forbidden band (bands scale with the derated maximum). Sorted, disjoint;
/// empty at zero head.
std::vector<MwInterval> feasible_ranges(const TurbineUnit& unit, Length head);

struct PlantDispatchProblem {
    std::vector<TurbineUnit> units;
    Length head = Length::meters(0.0);
    double target_mw = 0.0;
    double resolution_mw = 0.5;
};

struct DispatchSolution {
    std::vector<bool> committed;       // aligned with the problem's unit list
    std::vector<double> setpoints_mw;  // 0 for offline units
    double total_mw = 0.0;
    double plant_efficiency = 0.0;     // power-weighted average efficiency
    bool feasible = false;             // |total - target| <= resolution
};

/// Rough-zone-aware plant dispatch on a resolution_mw grid.
///
/// Every setpoint lies inside a feasible range (never inside a forbidden
/// band). Among grid assignments, selection order: closest total to the
/// target, then highest power-weighted efficiency, then fewer committed
/// units, then lexicographically smallest committed unit-index set, then
/// lexicographically smallest setpoint vector. When no assignment reaches
/// the target within one resolution step, the nearest achievable total is
/// returned with feasible = false.
///
/// Unit efficiency is evaluated at q_hat = setpoint / derated maximum
/// (flow fraction approximated by load fraction at the dispatch level) and
/// h_hat = head / rated head.
DispatchSolution dispatch_plant(const PlantDispatchProblem& problem);

struct FleetDispatchResult {
    std::vector<std::string> plant_ids;
    std::vector<DispatchSolution> plants;
    std::vector<double> plant_targets_mw;
    double unserved_mw = 0.0;
};

/// Fleet-level allocation: the system target is split across plants in
/// proportion to derated available capacity, each plant is dispatched, and
/// any residual is reallocated once to plants with remaining headroom.
FleetDispatchResult fleet_dispatch(const std::vector<std::pair<BasinNode, Length>>& plants,
                                   double system_target_mw, double resolution_mw = 0.5);

} // namespace hydrosim

#endif
