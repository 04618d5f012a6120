#include "hydrosim/cli.hpp"

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hydrosim/csv.hpp"
#include "hydrosim/errors.hpp"
#include "hydrosim/study.hpp"

namespace hydrosim {

namespace {

void emit(const CsvTable& table, const std::string& out_path) {
    if (out_path.empty())
        std::cout << table.to_string();
    else
        write_file_atomic(out_path, table.to_string());
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"hydropower-aware power system study toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, out_dir, freq_csv, model_name = "nonlinear";
    std::string metrics_path;
    double target_mw = -1.0;

    auto add_scenario = [&](CLI::App* cmd) {
        cmd->add_option("-s,--scenario", scenario_path, "scenario file (JSON)")->required();
    };

    CLI::App* derate = app.add_subcommand("derate", "per-plant head-derated capacity");
    add_scenario(derate);
    derate->add_option("-o,--out", out_path, "output CSV (stdout if omitted)");

    CLI::App* route = app.add_subcommand("route", "basin water routing and constraint check");
    add_scenario(route);
    route->add_option("-o,--out", out_path, "basin state CSV (stdout if omitted)");
    std::string violations_path;
    route->add_option("--violations", violations_path, "violation report CSV");

    CLI::App* dispatch = app.add_subcommand("dispatch", "rough-zone-aware fleet dispatch");
    add_scenario(dispatch);
    dispatch->add_option("-t,--target", target_mw, "system target MW (defaults to the scenario's)");
    dispatch->add_option("-o,--out", out_path, "dispatch table CSV (stdout if omitted)");

    CLI::App* simulate = app.add_subcommand("simulate", "frequency-event time-domain simulation");
    add_scenario(simulate);
    simulate->add_option("-m,--model", model_name, "turbine model: nonlinear|linearized")
        ->check(CLI::IsMember({"nonlinear", "linearized"}));
    simulate->add_option("-o,--out", out_path, "time series CSV (stdout if omitted)");
    simulate->add_option("--metrics", metrics_path, "metrics summary file (always printed)");

    CLI::App* ridethrough =
        app.add_subcommand("ridethrough", "frequency ride-through envelope evaluation");
    add_scenario(ridethrough);
    ridethrough->add_option("-f,--freq-csv", freq_csv, "frequency trace CSV (simulate output)")
        ->required();
    ridethrough->add_option("-o,--out", out_path, "trip report CSV (stdout if omitted)");

    CLI::App* report = app.add_subcommand("report", "all-in-one study bundle");
    add_scenario(report);
    report->add_option("-d,--out-dir", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Scenario scenario = load_scenario(scenario_path);

        if (derate->parsed()) {
            emit(run_derate_study(scenario).table, out_path);
            return 0;
        }
        if (route->parsed()) {
            RouteStudy study = run_route_study(scenario);
            emit(study.state_csv, out_path);
            if (!violations_path.empty())
                write_file_atomic(violations_path, study.violations_csv.to_string());
            if (!study.violations.empty()) {
                std::cerr << study.violations.size() << " constraint violation(s):\n"
                          << study.violations_csv.to_string();
                return 1;
            }
            return 0;
        }
        if (dispatch->parsed()) {
            double target = target_mw >= 0 ? target_mw
                            : scenario.dispatch_target_mw ? *scenario.dispatch_target_mw
                                                          : -1.0;
            if (target < 0)
                throw ValidationError("dispatch needs --target or a dispatch.target_mw field");
            DispatchStudy study = run_dispatch_study(scenario, target);
            emit(study.table, out_path);
            bool ok = study.fleet.unserved_mw <= scenario.solver.resolution_mw;
            for (const auto& sol : study.fleet.plants) ok = ok && sol.feasible;
            if (!ok) {
                std::cerr << "dispatch infeasible; unserved_mw="
                          << format_float(study.fleet.unserved_mw) << "\n";
                return 1;
            }
            return 0;
        }
        if (simulate->parsed()) {
            TurbineModelKind model = model_name == "linearized" ? TurbineModelKind::Linearized
                                                                : TurbineModelKind::Nonlinear;
            SimulateStudy study = run_simulate_study(scenario, model);
            emit(study.series_csv, out_path);
            std::cout << study.metrics_text;
            if (!metrics_path.empty()) write_file_atomic(metrics_path, study.metrics_text);
            return study.result.metrics.frequency_collapse ? 1 : 0;
        }
        if (ridethrough->parsed()) {
            auto [trace, dt] = load_frequency_csv(freq_csv);
            RidethroughStudy study = run_ridethrough_study(scenario, trace, dt);
            emit(study.table, out_path);
            return study.report.any_tripped() ? 1 : 0;
        }
        if (report->parsed()) {
            return run_report(scenario, out_dir) ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace hydrosim
