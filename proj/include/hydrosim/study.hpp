#ifndef HYDROSIM_STUDY_HPP
#define HYDROSIM_STUDY_HPP

#include <string>
#include <vector>

#include "hydrosim/csv.hpp"
#include "hydrosim/dispatch.hpp"
#include "hydrosim/dynamics.hpp"
#include "hydrosim/protection.hpp"
#include "hydrosim/river_network.hpp"
#include "hydrosim/scenario.hpp"

namespace hydrosim {

/// Per-plant head-derated capacity under the scenario's water condition;
/// one row per telemetry sample for the telemetry node, one row otherwise.
struct DerateStudy {
    CsvTable table;
};
DerateStudy run_derate_study(const Scenario& scenario);

/// Water routing over the scenario's inflow/release series, with implied
/// generation (turbined release at routed head) and constraint screening.
struct RouteStudy {
    BasinState state;
    NodeSeries implied_generation_mw;
    std::vector<Violation> violations;
    CsvTable state_csv;
    CsvTable violations_csv;
};
RouteStudy run_route_study(const Scenario& scenario);

struct SimulateStudy {
    FrequencySimResult result;
    std::vector<std::string> unit_labels;
    CsvTable series_csv;
    std::string metrics_text;
};
SimulateStudy run_simulate_study(const Scenario& scenario, TurbineModelKind model);

struct DispatchStudy {
    FleetDispatchResult fleet;
    CsvTable table;
};
DispatchStudy run_dispatch_study(const Scenario& scenario, double system_target_mw);

struct RidethroughStudy {
    TripReport report;
    CsvTable table;
};
RidethroughStudy run_ridethrough_study(const Scenario& scenario,
                                       const std::vector<double>& frequency_hz, double dt_s);

/// Reads a frequency trace from CSV columns time_s and frequency_hz
/// (simulate output is accepted as-is). Returns the trace and its dt.
std::pair<std::vector<double>, double> load_frequency_csv(const std::string& path);

/// All-in-one study bundle written into out_dir. Returns true when every
/// sub-study is clean (no violations, trips, unserved target, or collapse).
bool run_report(const Scenario& scenario, const std::string& out_dir);

} // namespace hydrosim

#endif
