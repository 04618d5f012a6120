#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hydrosim/dispatch.hpp"
#include "hydrosim/dynamics.hpp"
#include "hydrosim/errors.hpp"
#include "hydrosim/hydro_physics.hpp"
#include "hydrosim/protection.hpp"
#include "hydrosim/river_network.hpp"
#include "hydrosim/scenario.hpp"
#include "hydrosim/study.hpp"
#include "hydrosim/telemetry.hpp"

namespace py = pybind11;
using namespace hydrosim;

PYBIND11_MODULE(_hydrosim, m) {
    m.doc() = "Hydropower-constraint-aware power system study toolkit";

    static py::exception<Error> exc_base(m, "Error");
    py::register_exception<ValidationError>(m, "ValidationError", exc_base);
    py::register_exception<ParseError>(m, "ParseError", exc_base);
    py::register_exception<NegativeHeadError>(m, "NegativeHeadError", exc_base);
    py::register_exception<UnitMismatchError>(m, "UnitMismatchError", exc_base);
    py::register_exception<InvalidHeadError>(m, "InvalidHeadError", exc_base);
    py::register_exception<TopologyError>(m, "TopologyError", exc_base);
    py::register_exception<StorageUnderflowError>(m, "StorageUnderflowError", exc_base);
    py::register_exception<OutOfTableError>(m, "OutOfTableError", exc_base);
    py::register_exception<InfeasibleInitError>(m, "InfeasibleInitError", exc_base);
    py::register_exception<NumericalDivergenceError>(m, "NumericalDivergenceError", exc_base);
    py::register_exception<MissingEnvelopeError>(m, "MissingEnvelopeError", exc_base);
    py::register_exception<PreconditionError>(m, "PreconditionError", exc_base);

    py::enum_<LengthUnit>(m, "LengthUnit")
        .value("FEET", LengthUnit::Feet)
        .value("METERS", LengthUnit::Meters);

    py::class_<Length>(m, "Length")
        .def(py::init([](double value, const std::string& unit) {
                 return Length{value, length_unit_from_string(unit)};
             }),
             py::arg("value"), py::arg("unit") = "m")
        .def_static("feet", &Length::feet)
        .def_static("meters", &Length::meters)
        .def_readwrite("value", &Length::value)
        .def_readwrite("unit", &Length::unit)
        .def("in_meters", &Length::in_meters)
        .def("__repr__", [](const Length& l) {
            return "Length(" + std::to_string(l.value) + ", '" + to_string(l.unit) + "')";
        });

    py::enum_<TurbineType>(m, "TurbineType")
        .value("FRANCIS", TurbineType::Francis)
        .value("KAPLAN", TurbineType::Kaplan)
        .value("PROPELLER", TurbineType::Propeller)
        .value("PELTON", TurbineType::Pelton);

    py::class_<TurbineUnit>(m, "TurbineUnit")
        .def(py::init())
        .def_static("defaults_for", &TurbineUnit::defaults_for, py::arg("type"))
        .def_readwrite("name", &TurbineUnit::name)
        .def_readwrite("turbine_type", &TurbineUnit::turbine_type)
        .def_readwrite("rated_power_mw", &TurbineUnit::rated_power_mw)
        .def_readwrite("rated_head", &TurbineUnit::rated_head)
        .def_readwrite("rated_flow_m3s", &TurbineUnit::rated_flow_m3s)
        .def_readwrite("full_gate_flow_coeff", &TurbineUnit::full_gate_flow_coeff)
        .def_readwrite("eta_peak", &TurbineUnit::eta_peak)
        .def_readwrite("q_hat_peak", &TurbineUnit::q_hat_peak)
        .def_readwrite("shape_exponent", &TurbineUnit::shape_exponent)
        .def_readwrite("shape_width", &TurbineUnit::shape_width)
        .def_readwrite("head_falloff_k", &TurbineUnit::head_falloff_k)
        .def_readwrite("min_load_frac", &TurbineUnit::min_load_frac)
        .def_readwrite("max_load_frac", &TurbineUnit::max_load_frac)
        .def_readwrite("forbidden_bands", &TurbineUnit::forbidden_bands)
        .def_readwrite("water_time_constant_tw_s", &TurbineUnit::water_time_constant_tw_s)
        .def_readwrite("no_load_flow_qnl", &TurbineUnit::no_load_flow_qnl)
        .def_readwrite("turbine_gain_at", &TurbineUnit::turbine_gain_at)
        .def_readwrite("inertia_h_s", &TurbineUnit::inertia_h_s)
        .def_readwrite("mva_rating", &TurbineUnit::mva_rating)
        .def_readwrite("shaft_speed_hz", &TurbineUnit::shaft_speed_hz)
        .def("validate", &TurbineUnit::validate);

    py::class_<HeadState>(m, "HeadState")
        .def_readonly("forebay_elevation", &HeadState::forebay_elevation)
        .def_readonly("tailwater_elevation", &HeadState::tailwater_elevation)
        .def_readonly("head", &HeadState::head)
        .def("operable", &HeadState::operable);

    m.def("compute_head", &compute_head, py::arg("forebay"), py::arg("tailwater"));
    m.def("make_head_state", &make_head_state, py::arg("forebay"), py::arg("tailwater"));
    m.def("derate_max_power", &derate_max_power, py::arg("p_max_nominal_mw"), py::arg("head"),
          py::arg("rated_head"));
    m.def(
        "efficiency",
        [](const TurbineUnit& unit, double q_hat, double h_hat) {
            return efficiency(unit, EfficiencyQuery{q_hat, h_hat});
        },
        py::arg("unit"), py::arg("q_hat"), py::arg("h_hat") = 1.0);
    m.def("mechanical_power", &mechanical_power, py::arg("flow_m3s"), py::arg("head"),
          py::arg("eta"));
    m.def("gate_to_flow", &gate_to_flow, py::arg("gate"), py::arg("head_pu"),
          py::arg("full_gate_flow_coeff") = 1.0);

    py::enum_<NodeKind>(m, "NodeKind")
        .value("RESERVOIR", NodeKind::Reservoir)
        .value("RUN_OF_RIVER", NodeKind::RunOfRiver);

    py::class_<BasinNode>(m, "BasinNode")
        .def(py::init())
        .def_readwrite("node_id", &BasinNode::node_id)
        .def_readwrite("kind", &BasinNode::kind)
        .def_readwrite("storage_elevation_table", &BasinNode::storage_elevation_table)
        .def_readwrite("elevation_unit", &BasinNode::elevation_unit)
        .def_readwrite("tailwater_elevation", &BasinNode::tailwater_elevation)
        .def_readwrite("min_storage_m3", &BasinNode::min_storage_m3)
        .def_readwrite("max_storage_m3", &BasinNode::max_storage_m3)
        .def_readwrite("initial_storage_m3", &BasinNode::initial_storage_m3)
        .def_readwrite("min_environmental_flow_m3s", &BasinNode::min_environmental_flow_m3s)
        .def_readwrite("min_generation_mw", &BasinNode::min_generation_mw)
        .def_readwrite("forebay_elevation", &BasinNode::forebay_elevation)
        .def_readwrite("plant", &BasinNode::plant);

    py::class_<Reach>(m, "Reach")
        .def(py::init())
        .def_readwrite("from_node", &Reach::from_node)
        .def_readwrite("to_node", &Reach::to_node)
        .def_readwrite("travel_time_s", &Reach::travel_time_s);

    py::class_<BasinNetwork>(m, "BasinNetwork")
        .def(py::init())
        .def_readwrite("nodes", &BasinNetwork::nodes)
        .def_readwrite("reaches", &BasinNetwork::reaches)
        .def("validate", &BasinNetwork::validate)
        .def("topological_order", &BasinNetwork::topological_order);

    py::class_<BasinState>(m, "BasinState")
        .def_readonly("dt_s", &BasinState::dt_s)
        .def_readonly("horizon", &BasinState::horizon)
        .def_readonly("inflow_m3s", &BasinState::inflow_m3s)
        .def_readonly("release_m3s", &BasinState::release_m3s)
        .def_readonly("spill_m3s", &BasinState::spill_m3s)
        .def_readonly("outflow_m3s", &BasinState::outflow_m3s)
        .def_readonly("storage_m3", &BasinState::storage_m3)
        .def_readonly("head_m", &BasinState::head_m);

    py::enum_<InTransitInit>(m, "InTransitInit")
        .value("STEADY_PASS_THROUGH", InTransitInit::SteadyPassThrough)
        .value("ZERO", InTransitInit::Zero);

    m.def("route_water", &route_water, py::arg("network"), py::arg("lateral_inflows_m3s"),
          py::arg("releases_m3s"), py::arg("dt_s"), py::arg("horizon"),
          py::arg("in_transit") = InTransitInit::SteadyPassThrough);

    py::enum_<ViolationKind>(m, "ViolationKind")
        .value("MIN_FLOW", ViolationKind::MinFlow)
        .value("MIN_GENERATION", ViolationKind::MinGeneration)
        .value("STORAGE_BOUND", ViolationKind::StorageBound);

    py::class_<Violation>(m, "Violation")
        .def_readonly("node_id", &Violation::node_id)
        .def_readonly("step", &Violation::step)
        .def_readonly("kind", &Violation::kind);

    m.def("check_constraints", &check_constraints, py::arg("network"), py::arg("state"),
          py::arg("generation_mw") = NodeSeries{});
    m.def("head_from_storage", &head_from_storage, py::arg("node"), py::arg("storage_m3"));
    m.def("available_capacity_series", &available_capacity_series, py::arg("network"),
          py::arg("state"));

    py::class_<MwInterval>(m, "MwInterval")
        .def_readonly("lo_mw", &MwInterval::lo_mw)
        .def_readonly("hi_mw", &MwInterval::hi_mw)
        .def("__repr__", [](const MwInterval& r) {
            return "MwInterval(" + std::to_string(r.lo_mw) + ", " + std::to_string(r.hi_mw) + ")";
        });

    m.def("feasible_ranges", &feasible_ranges, py::arg("unit"), py::arg("head"));

    py::class_<PlantDispatchProblem>(m, "PlantDispatchProblem")
        .def(py::init())
        .def_readwrite("units", &PlantDispatchProblem::units)
        .def_readwrite("head", &PlantDispatchProblem::head)
        .def_readwrite("target_mw", &PlantDispatchProblem::target_mw)
        .def_readwrite("resolution_mw", &PlantDispatchProblem::resolution_mw);

    py::class_<DispatchSolution>(m, "DispatchSolution")
        .def_readonly("committed", &DispatchSolution::committed)
        .def_readonly("setpoints_mw", &DispatchSolution::setpoints_mw)
        .def_readonly("total_mw", &DispatchSolution::total_mw)
        .def_readonly("plant_efficiency", &DispatchSolution::plant_efficiency)
        .def_readonly("feasible", &DispatchSolution::feasible);

    m.def("dispatch_plant", &dispatch_plant, py::arg("problem"));

    py::class_<FleetDispatchResult>(m, "FleetDispatchResult")
        .def_readonly("plant_ids", &FleetDispatchResult::plant_ids)
        .def_readonly("plants", &FleetDispatchResult::plants)
        .def_readonly("plant_targets_mw", &FleetDispatchResult::plant_targets_mw)
        .def_readonly("unserved_mw", &FleetDispatchResult::unserved_mw);

    m.def("fleet_dispatch", &fleet_dispatch, py::arg("plants"), py::arg("system_target_mw"),
          py::arg("resolution_mw") = 0.5);

    py::class_<GovernorParams>(m, "GovernorParams")
        .def(py::init())
        .def_readwrite("permanent_droop_rp", &GovernorParams::permanent_droop_rp)
        .def_readwrite("temporary_droop_rt", &GovernorParams::temporary_droop_rt)
        .def_readwrite("reset_time_tr_s", &GovernorParams::reset_time_tr_s)
        .def_readwrite("servo_time_tg_s", &GovernorParams::servo_time_tg_s)
        .def_readwrite("gate_rate_limit", &GovernorParams::gate_rate_limit)
        .def_readwrite("deadband_hz", &GovernorParams::deadband_hz)
        .def_readwrite("gate_min", &GovernorParams::gate_min)
        .def_readwrite("gate_max", &GovernorParams::gate_max);

    py::class_<TurbineState>(m, "TurbineState")
        .def(py::init())
        .def_readwrite("flow_q", &TurbineState::flow_q)
        .def_readwrite("gate_g", &TurbineState::gate_g)
        .def_readwrite("head_h", &TurbineState::head_h)
        .def_readwrite("mech_power_pm", &TurbineState::mech_power_pm)
        .def_readwrite("static_head", &TurbineState::static_head);

    m.def("init_steady_state", &init_steady_state, py::arg("unit"), py::arg("governor"),
          py::arg("p0_pu"), py::arg("h0_pu"));
    m.def("step_nonlinear_turbine", &step_nonlinear_turbine, py::arg("unit"), py::arg("state"),
          py::arg("gate_command"), py::arg("dt_s"));

    py::class_<LinearizedTurbine>(m, "LinearizedTurbine")
        .def_static("init", &LinearizedTurbine::init, py::arg("unit"), py::arg("p0_pu"))
        .def("step", &LinearizedTurbine::step, py::arg("gate_command"), py::arg("dt_s"))
        .def_readonly("gate0", &LinearizedTurbine::gate0)
        .def_readonly("pm0", &LinearizedTurbine::pm0);

    py::class_<ResponsiveUnit>(m, "ResponsiveUnit")
        .def(py::init())
        .def_readwrite("unit", &ResponsiveUnit::unit)
        .def_readwrite("governor", &ResponsiveUnit::governor)
        .def_readwrite("initial_power_pu", &ResponsiveUnit::initial_power_pu)
        .def_readwrite("initial_head_pu", &ResponsiveUnit::initial_head_pu);

    py::class_<UflsStage>(m, "UflsStage")
        .def(py::init())
        .def_readwrite("threshold_hz", &UflsStage::threshold_hz)
        .def_readwrite("shed_fraction", &UflsStage::shed_fraction);

    py::class_<GridModel>(m, "GridModel")
        .def(py::init())
        .def_readwrite("system_base_mva", &GridModel::system_base_mva)
        .def_readwrite("f_nominal_hz", &GridModel::f_nominal_hz)
        .def_readwrite("responsive_units", &GridModel::responsive_units)
        .def_readwrite("nonresponsive_mw", &GridModel::nonresponsive_mw)
        .def_readwrite("nonresponsive_inertia_mws", &GridModel::nonresponsive_inertia_mws)
        .def_readwrite("load_damping_d", &GridModel::load_damping_d)
        .def_readwrite("ufls_stages", &GridModel::ufls_stages);

    py::class_<GenerationLossEvent>(m, "GenerationLossEvent")
        .def(py::init())
        .def_readwrite("t0_s", &GenerationLossEvent::t0_s)
        .def_readwrite("loss_mw", &GenerationLossEvent::loss_mw);

    py::enum_<TurbineModelKind>(m, "TurbineModelKind")
        .value("NONLINEAR", TurbineModelKind::Nonlinear)
        .value("LINEARIZED", TurbineModelKind::Linearized);

    py::class_<SimMetrics>(m, "SimMetrics")
        .def_readonly("rocof_hz_per_s", &SimMetrics::rocof_hz_per_s)
        .def_readonly("nadir_hz", &SimMetrics::nadir_hz)
        .def_readonly("nadir_time_s", &SimMetrics::nadir_time_s)
        .def_readonly("settling_deviation_hz", &SimMetrics::settling_deviation_hz)
        .def_readonly("delivered_response_mw", &SimMetrics::delivered_response_mw)
        .def_readonly("ufls_shed_mw", &SimMetrics::ufls_shed_mw)
        .def_readonly("frequency_collapse", &SimMetrics::frequency_collapse);

    py::class_<FrequencySimResult>(m, "FrequencySimResult")
        .def_readonly("time_s", &FrequencySimResult::time_s)
        .def_readonly("frequency_hz", &FrequencySimResult::frequency_hz)
        .def_readonly("gate_pu", &FrequencySimResult::gate_pu)
        .def_readonly("flow_pu", &FrequencySimResult::flow_pu)
        .def_readonly("head_pu", &FrequencySimResult::head_pu)
        .def_readonly("pm_pu", &FrequencySimResult::pm_pu)
        .def_readonly("metrics", &FrequencySimResult::metrics);

    m.def("simulate_event", &simulate_event, py::arg("grid"), py::arg("event"),
          py::arg("duration_s"), py::arg("dt_s"),
          py::arg("turbine_model") = TurbineModelKind::Nonlinear);
    m.def("aggregate_stored_energy", &aggregate_stored_energy, py::arg("units_online"));

    py::class_<RoughZoneDiagnostic>(m, "RoughZoneDiagnostic")
        .def_readonly("in_rough_zone", &RoughZoneDiagnostic::in_rough_zone)
        .def_readonly("pm_perturbation_mw", &RoughZoneDiagnostic::pm_perturbation_mw);

    m.def("inject_rough_zone_oscillation", &inject_rough_zone_oscillation, py::arg("unit"),
          py::arg("power_fraction"), py::arg("shaft_speed_hz"), py::arg("duration_s"),
          py::arg("dt_s"), py::arg("amplitude_fraction") = 0.05);

    py::enum_<FleetClass>(m, "FleetClass")
        .value("HYDRO", FleetClass::Hydro)
        .value("STEAM", FleetClass::Steam)
        .value("GAS", FleetClass::Gas)
        .value("NUCLEAR", FleetClass::Nuclear);

    py::class_<EnvelopeBand>(m, "EnvelopeBand")
        .def(py::init())
        .def_readwrite("max_dwell_s", &EnvelopeBand::max_dwell_s)
        .def_readwrite("f_low_hz", &EnvelopeBand::f_low_hz)
        .def_readwrite("f_high_hz", &EnvelopeBand::f_high_hz);

    py::class_<RideThroughEnvelope>(m, "RideThroughEnvelope")
        .def(py::init())
        .def_readwrite("fleet_class", &RideThroughEnvelope::fleet_class)
        .def_readwrite("bands", &RideThroughEnvelope::bands)
        .def("validate", &RideThroughEnvelope::validate);

    m.def("default_envelopes", &default_envelopes);

    py::class_<GeneratorTrip>(m, "GeneratorTrip")
        .def_readonly("generator_id", &GeneratorTrip::generator_id)
        .def_readonly("fleet_class", &GeneratorTrip::fleet_class)
        .def_readonly("tripped", &GeneratorTrip::tripped)
        .def_readonly("trip_time_s", &GeneratorTrip::trip_time_s)
        .def_readonly("violated_band", &GeneratorTrip::violated_band);

    py::class_<TripReport>(m, "TripReport")
        .def_readonly("per_generator", &TripReport::per_generator)
        .def_readonly("tripped_by_class", &TripReport::tripped_by_class)
        .def_readonly("total_by_class", &TripReport::total_by_class)
        .def("any_tripped", &TripReport::any_tripped);

    m.def("evaluate_ridethrough", &evaluate_ridethrough, py::arg("frequency_hz"), py::arg("dt_s"),
          py::arg("fleet"), py::arg("envelopes"));

    py::class_<TelemetrySeries>(m, "TelemetrySeries")
        .def_readonly("timestamps", &TelemetrySeries::timestamps)
        .def_readonly("forebay", &TelemetrySeries::forebay)
        .def_readonly("tailwater", &TelemetrySeries::tailwater)
        .def_readonly("head", &TelemetrySeries::head)
        .def_readonly("unit", &TelemetrySeries::unit);

    m.def("ingest_forebay_csv", &ingest_forebay_csv, py::arg("path"), py::arg("tailwater_default"));

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("network", &Scenario::network)
        .def("plant_head", &Scenario::plant_head, py::arg("node_index"))
        .def("build_grid_model", &Scenario::build_grid_model)
        .def("to_json", [](const Scenario& s) { return scenario_to_json(s); });

    m.def("load_scenario", &load_scenario, py::arg("path"));

    py::class_<SimulateStudy>(m, "SimulateStudy")
        .def_readonly("result", &SimulateStudy::result)
        .def_readonly("unit_labels", &SimulateStudy::unit_labels)
        .def_readonly("metrics_text", &SimulateStudy::metrics_text);

    m.def(
        "run_simulate_study",
        [](const Scenario& s, TurbineModelKind model) { return run_simulate_study(s, model); },
        py::arg("scenario"), py::arg("model") = TurbineModelKind::Nonlinear);
    m.def("run_report", &run_report, py::arg("scenario"), py::arg("out_dir"));

    m.attr("__version__") = "0.1.0";
}
