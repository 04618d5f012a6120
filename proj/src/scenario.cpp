#include "hydrosim/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hydrosim/errors.hpp"
#include "hydrosim/hydro_physics.hpp"
#include "hydrosim/log.hpp"
#include "hydrosim/telemetry.hpp"

namespace hydrosim {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ValidationError(where + ": missing required field '" + key + "'");
    return *it;
}

double num_or(const json& j, const char* key, double def, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_number())
        throw ValidationError(where + "." + key + ": expected a number");
    return it->get<double>();
}

std::string str_or(const json& j, const char* key, const std::string& def,
                   const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_string())
        throw ValidationError(where + "." + key + ": expected a string");
    return it->get<std::string>();
}

Length parse_length(const json& j, const std::string& where) {
    if (j.is_number()) return Length::meters(j.get<double>());
    if (!j.is_object())
        throw ValidationError(where + ": expected {\"value\":..,\"unit\":\"ft|m\"} or a number (m)");
    return Length{require(j, "value", where).get<double>(),
                  length_unit_from_string(require(j, "unit", where).get<std::string>())};
}

json length_to_json(const Length& l) {
    return json{{"value", l.value}, {"unit", to_string(l.unit)}};
}

TurbineUnit parse_unit(const json& j, const std::string& where) {
    TurbineType type =
        turbine_type_from_string(str_or(j, "type", "francis", where));
    TurbineUnit u = TurbineUnit::defaults_for(type);
    u.name = str_or(j, "name", "unit", where);
    u.rated_power_mw = num_or(j, "rated_power_mw", u.rated_power_mw, where);
    if (j.contains("rated_head")) u.rated_head = parse_length(j.at("rated_head"), where + ".rated_head");
    u.rated_flow_m3s = num_or(j, "rated_flow_m3s", u.rated_flow_m3s, where);
    u.full_gate_flow_coeff = num_or(j, "full_gate_flow_coeff", u.full_gate_flow_coeff, where);
    u.eta_peak = num_or(j, "eta_peak", u.eta_peak, where);
    u.q_hat_peak = num_or(j, "q_hat_peak", u.q_hat_peak, where);
    u.shape_exponent = num_or(j, "shape_exponent", u.shape_exponent, where);
    u.shape_width = num_or(j, "shape_width", u.shape_width, where);
    u.head_falloff_k = num_or(j, "head_falloff_k", u.head_falloff_k, where);
    u.min_load_frac = num_or(j, "min_load_frac", u.min_load_frac, where);
    u.max_load_frac = num_or(j, "max_load_frac", u.max_load_frac, where);
    if (j.contains("forbidden_bands")) {
        u.forbidden_bands.clear();
        for (const auto& band : j.at("forbidden_bands")) {
            if (!band.is_array() || band.size() != 2)
                throw ValidationError(where + ".forbidden_bands: each band is [lo, hi]");
            u.forbidden_bands.emplace_back(band[0].get<double>(), band[1].get<double>());
        }
    }
    u.water_time_constant_tw_s = num_or(j, "tw_s", u.water_time_constant_tw_s, where);
    u.no_load_flow_qnl = num_or(j, "qnl", u.no_load_flow_qnl, where);
    u.turbine_gain_at = num_or(j, "at", u.turbine_gain_at, where);
    u.inertia_h_s = num_or(j, "inertia_h_s", u.inertia_h_s, where);
    u.mva_rating = num_or(j, "mva_rating", u.mva_rating, where);
    u.shaft_speed_hz = num_or(j, "shaft_speed_hz", u.shaft_speed_hz, where);
    return u;
}

json unit_to_json(const TurbineUnit& u) {
    json bands = json::array();
    for (const auto& [lo, hi] : u.forbidden_bands) bands.push_back(json::array({lo, hi}));
    return json{
        {"name", u.name},
        {"type", to_string(u.turbine_type)},
        {"rated_power_mw", u.rated_power_mw},
        {"rated_head", length_to_json(u.rated_head)},
        {"rated_flow_m3s", u.rated_flow_m3s},
        {"full_gate_flow_coeff", u.full_gate_flow_coeff},
        {"eta_peak", u.eta_peak},
        {"q_hat_peak", u.q_hat_peak},
        {"shape_exponent", u.shape_exponent},
        {"shape_width", u.shape_width},
        {"head_falloff_k", u.head_falloff_k},
        {"min_load_frac", u.min_load_frac},
        {"max_load_frac", u.max_load_frac},
        {"forbidden_bands", bands},
        {"tw_s", u.water_time_constant_tw_s},
        {"qnl", u.no_load_flow_qnl},
        {"at", u.turbine_gain_at},
        {"inertia_h_s", u.inertia_h_s},
        {"mva_rating", u.mva_rating},
        {"shaft_speed_hz", u.shaft_speed_hz},
    };
}

GovernorParams parse_governor(const json& j, const std::string& where) {
    GovernorParams g;
    g.permanent_droop_rp = num_or(j, "permanent_droop_rp", g.permanent_droop_rp, where);
    g.temporary_droop_rt = num_or(j, "temporary_droop_rt", g.temporary_droop_rt, where);
    g.reset_time_tr_s = num_or(j, "reset_time_tr_s", g.reset_time_tr_s, where);
    g.servo_time_tg_s = num_or(j, "servo_time_tg_s", g.servo_time_tg_s, where);
    g.gate_rate_limit = num_or(j, "gate_rate_limit", g.gate_rate_limit, where);
    g.deadband_hz = num_or(j, "deadband_hz", g.deadband_hz, where);
    g.gate_min = num_or(j, "gate_min", g.gate_min, where);
    g.gate_max = num_or(j, "gate_max", g.gate_max, where);
    return g;
}

json governor_to_json(const GovernorParams& g) {
    return json{
        {"permanent_droop_rp", g.permanent_droop_rp},
        {"temporary_droop_rt", g.temporary_droop_rt},
        {"reset_time_tr_s", g.reset_time_tr_s},
        {"servo_time_tg_s", g.servo_time_tg_s},
        {"gate_rate_limit", g.gate_rate_limit},
        {"deadband_hz", g.deadband_hz},
        {"gate_min", g.gate_min},
        {"gate_max", g.gate_max},
    };
}

NodeSeries parse_node_series(const json& j, const std::string& where) {
    NodeSeries series;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_array())
            throw ValidationError(where + "." + it.key() + ": expected an array of samples");
        series[it.key()] = it.value().get<std::vector<double>>();
    }
    return series;
}

json node_series_to_json(const NodeSeries& series) {
    json j = json::object();
    for (const auto& [id, values] : series) j[id] = values;
    return j;
}

RideThroughEnvelope parse_envelope(const json& j, FleetClass cls, const std::string& where) {
    RideThroughEnvelope env;
    env.fleet_class = cls;
    for (const auto& band : require(j, "bands", where)) {
        if (!band.is_array() || band.size() != 3)
            throw ValidationError(where + ".bands: each band is [max_dwell_s, f_low, f_high]");
        double dwell = band[0].is_null() ? std::numeric_limits<double>::infinity()
                                         : band[0].get<double>();
        env.bands.push_back({dwell, band[1].get<double>(), band[2].get<double>()});
    }
    return env;
}

json envelope_to_json(const RideThroughEnvelope& env) {
    json bands = json::array();
    for (const auto& b : env.bands) {
        json dwell = std::isinf(b.max_dwell_s) ? json() : json(b.max_dwell_s);
        bands.push_back(json::array({dwell, b.f_low_hz, b.f_high_hz}));
    }
    return json{{"bands", bands}};
}

} // namespace

double WaterCondition::head_scale() const {
    if (condition == "high") return 1.0;
    if (condition == "nominal") return 0.9;
    if (condition == "low") return 0.79;
    throw ValidationError("water.condition must be high, nominal, or low (got '" + condition + "')");
}

Length Scenario::plant_head(int node_index) const {
    const BasinNode& node = network.nodes[node_index];
    if (!water.forebay_csv.empty() && water.csv_node_id == node.node_id) {
        TelemetrySeries series =
            ingest_forebay_csv(water.forebay_csv, Length{water.tailwater_default, water.csv_unit});
        return Length{series.head.back(), series.unit};
    }
    Length base = Length::meters(0.0);
    if (node.kind == NodeKind::Reservoir) {
        base = head_from_storage(node, node.initial_storage_m3);
    } else if (node.forebay_elevation) {
        base = compute_head(Length{*node.forebay_elevation, node.elevation_unit},
                            Length{node.tailwater_elevation, node.elevation_unit});
    } else if (!node.plant.empty()) {
        base = node.plant.front().rated_head;
    }
    return Length{base.value * water.head_scale(), base.unit};
}

double Scenario::unit_initial_head_pu(int node_index, int unit_index) const {
    if (initial_head_pu[node_index][unit_index])
        return *initial_head_pu[node_index][unit_index];
    const TurbineUnit& unit = network.nodes[node_index].plant[unit_index];
    return plant_head(node_index).in_meters() / unit.rated_head.in_meters();
}

GridModel Scenario::build_grid_model() const {
    GridModel model;
    model.system_base_mva = grid.system_base_mva;
    model.f_nominal_hz = grid.f_nominal_hz;
    model.load_damping_d = grid.load_damping_d;
    model.nonresponsive_mw = grid.nonresponsive_mw;
    model.nonresponsive_inertia_mws = grid.nonresponsive_inertia_mws;
    model.ufls_stages = grid.ufls;
    for (size_t i = 0; i < network.nodes.size(); ++i) {
        for (size_t j = 0; j < network.nodes[i].plant.size(); ++j) {
            double p0_mw = initial_power_mw[i][j];
            if (p0_mw < 0) continue;  // offline
            ResponsiveUnit r;
            r.unit = network.nodes[i].plant[j];
            r.governor = governors[i][j];
            r.initial_power_pu = p0_mw / r.unit.mva_rating;
            r.initial_head_pu = unit_initial_head_pu(static_cast<int>(i), static_cast<int>(j));
            model.responsive_units.push_back(std::move(r));
        }
    }
    return model;
}

void Scenario::validate() const {
    network.validate();
    water.head_scale();
    if (governors.size() != network.nodes.size() ||
        initial_power_mw.size() != network.nodes.size() ||
        initial_head_pu.size() != network.nodes.size())
        throw ValidationError("per-unit tables must parallel the node list");
    for (size_t i = 0; i < network.nodes.size(); ++i) {
        size_t n_units = network.nodes[i].plant.size();
        if (governors[i].size() != n_units || initial_power_mw[i].size() != n_units ||
            initial_head_pu[i].size() != n_units)
            throw ValidationError("node '" + network.nodes[i].node_id +
                                  "': per-unit tables must parallel the unit list");
        for (const auto& g : governors[i]) g.validate();
    }
    if (solver.dt_s <= 0 || solver.duration_s <= 0 || solver.resolution_mw <= 0 ||
        solver.routing_dt_s <= 0)
        throw ValidationError("solver settings must be positive");
    if (!water.forebay_csv.empty()) {
        if (!std::filesystem::exists(water.forebay_csv))
            throw ValidationError("water.forebay_csv: file '" + water.forebay_csv +
                                  "' does not exist");
        network.node_index(water.csv_node_id);
    }
    int horizon = water.routing_horizon;
    for (const auto& [id, series] : water.inflows_m3s) {
        network.node_index(id);
        if (horizon && static_cast<int>(series.size()) != horizon)
            throw ValidationError("water.inflows." + id + ": expected " + std::to_string(horizon) +
                                  " samples");
    }
    for (const auto& [id, series] : water.releases_m3s) {
        network.node_index(id);
        if (horizon && static_cast<int>(series.size()) != horizon)
            throw ValidationError("water.releases." + id + ": expected " + std::to_string(horizon) +
                                  " samples");
    }
    GridSettings g = grid;
    GridModel probe;
    probe.system_base_mva = g.system_base_mva;
    probe.f_nominal_hz = g.f_nominal_hz;
    probe.load_damping_d = g.load_damping_d;
    probe.nonresponsive_mw = g.nonresponsive_mw;
    probe.nonresponsive_inertia_mws = g.nonresponsive_inertia_mws;
    probe.ufls_stages = g.ufls;
    probe.validate();
    for (const auto& [cls, env] : envelopes) env.validate();
    for (const auto& [id, cls] : protection_fleet)
        if (envelopes.find(cls) == envelopes.end())
            throw ValidationError("protection fleet '" + id + "': no envelope for class " +
                                  to_string(cls));
    if (dispatch_target_mw && *dispatch_target_mw < 0)
        throw ValidationError("dispatch.target_mw must be >= 0");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    std::filesystem::path base_dir = std::filesystem::path(path).parent_path();

    Scenario s;
    s.name = str_or(j, "name", "scenario", "scenario");

    const json& jnet = require(j, "network", "scenario");
    for (const auto& jn : require(jnet, "nodes", "network")) {
        BasinNode node;
        node.node_id = require(jn, "id", "network.nodes").get<std::string>();
        const std::string where = "node '" + node.node_id + "'";
        node.kind = node_kind_from_string(str_or(jn, "kind", "run_of_river", where));
        node.elevation_unit = length_unit_from_string(str_or(jn, "elevation_unit", "m", where));
        node.tailwater_elevation = num_or(jn, "tailwater_elevation", 0.0, where);
        if (jn.contains("storage_elevation_table")) {
            for (const auto& row : jn.at("storage_elevation_table")) {
                if (!row.is_array() || row.size() != 2)
                    throw ValidationError(where + ".storage_elevation_table: rows are [m3, elevation]");
                node.storage_elevation_table.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
        }
        node.min_storage_m3 = num_or(jn, "min_storage_m3", 0.0, where);
        node.max_storage_m3 = num_or(jn, "max_storage_m3", 0.0, where);
        node.initial_storage_m3 = num_or(jn, "initial_storage_m3", 0.0, where);
        node.min_environmental_flow_m3s = num_or(jn, "min_environmental_flow_m3s", 0.0, where);
        node.min_generation_mw = num_or(jn, "min_generation_mw", 0.0, where);
        if (jn.contains("forebay_elevation"))
            node.forebay_elevation = jn.at("forebay_elevation").get<double>();

        std::vector<GovernorParams> node_governors;
        std::vector<double> node_power;
        std::vector<std::optional<double>> node_head;
        if (jn.contains("units")) {
            for (const auto& ju : jn.at("units")) {
                TurbineUnit unit = parse_unit(ju, where + ".units");
                node.plant.push_back(unit);
                node_governors.push_back(
                    ju.contains("governor")
                        ? parse_governor(ju.at("governor"), where + "." + unit.name + ".governor")
                        : GovernorParams{});
                node_power.push_back(num_or(ju, "initial_power_mw", -1.0, where));
                if (ju.contains("initial_head_pu"))
                    node_head.push_back(ju.at("initial_head_pu").get<double>());
                else
                    node_head.push_back(std::nullopt);
            }
        }
        s.network.nodes.push_back(std::move(node));
        s.governors.push_back(std::move(node_governors));
        s.initial_power_mw.push_back(std::move(node_power));
        s.initial_head_pu.push_back(std::move(node_head));
    }
    if (jnet.contains("reaches")) {
        for (const auto& jr : jnet.at("reaches")) {
            Reach r;
            r.from_node = require(jr, "from", "network.reaches").get<std::string>();
            r.to_node = require(jr, "to", "network.reaches").get<std::string>();
            r.travel_time_s = num_or(jr, "travel_time_s", 0.0, "network.reaches");
            s.network.reaches.push_back(std::move(r));
        }
    }

    if (j.contains("water")) {
        const json& jw = j.at("water");
        s.water.condition = str_or(jw, "condition", "nominal", "water");
        std::string csv = str_or(jw, "forebay_csv", "", "water");
        if (!csv.empty()) {
            std::filesystem::path p(csv);
            if (p.is_relative()) p = base_dir / p;
            s.water.forebay_csv = p.lexically_normal().string();
            s.water.csv_node_id = require(jw, "csv_node_id", "water").get<std::string>();
            s.water.csv_unit = length_unit_from_string(str_or(jw, "csv_unit", "ft", "water"));
            s.water.tailwater_default = num_or(jw, "tailwater_default", 0.0, "water");
        }
        if (jw.contains("inflows_m3s"))
            s.water.inflows_m3s = parse_node_series(jw.at("inflows_m3s"), "water.inflows_m3s");
        if (jw.contains("releases_m3s"))
            s.water.releases_m3s = parse_node_series(jw.at("releases_m3s"), "water.releases_m3s");
        s.water.routing_horizon =
            static_cast<int>(num_or(jw, "routing_horizon", 0.0, "water"));
        if (s.water.routing_horizon == 0 && !s.water.inflows_m3s.empty())
            s.water.routing_horizon =
                static_cast<int>(s.water.inflows_m3s.begin()->second.size());
    }

    if (j.contains("grid")) {
        const json& jg = j.at("grid");
        s.grid.system_base_mva = num_or(jg, "system_base_mva", s.grid.system_base_mva, "grid");
        s.grid.f_nominal_hz = num_or(jg, "f_nominal_hz", s.grid.f_nominal_hz, "grid");
        s.grid.load_damping_d = num_or(jg, "load_damping_d", s.grid.load_damping_d, "grid");
        s.grid.nonresponsive_mw = num_or(jg, "nonresponsive_mw", 0.0, "grid");
        s.grid.nonresponsive_inertia_mws = num_or(jg, "nonresponsive_inertia_mws", 0.0, "grid");
        if (jg.contains("ufls")) {
            for (const auto& ju : jg.at("ufls")) {
                UflsStage stage;
                stage.threshold_hz = require(ju, "threshold_hz", "grid.ufls").get<double>();
                stage.shed_fraction = require(ju, "shed_fraction", "grid.ufls").get<double>();
                s.grid.ufls.push_back(stage);
            }
        }
    }

    if (j.contains("event")) {
        const json& je = j.at("event");
        s.event.t0_s = num_or(je, "t0_s", 1.0, "event");
        s.event.loss_mw = num_or(je, "loss_mw", 0.0, "event");
    }

    if (j.contains("solver")) {
        const json& js = j.at("solver");
        s.solver.dt_s = num_or(js, "dt_s", s.solver.dt_s, "solver");
        s.solver.duration_s = num_or(js, "duration_s", s.solver.duration_s, "solver");
        s.solver.resolution_mw = num_or(js, "resolution_mw", s.solver.resolution_mw, "solver");
        s.solver.routing_dt_s = num_or(js, "routing_dt_s", s.solver.routing_dt_s, "solver");
    }

    s.envelopes = default_envelopes();
    if (j.contains("protection")) {
        const json& jp = j.at("protection");
        if (jp.contains("envelopes")) {
            for (auto it = jp.at("envelopes").begin(); it != jp.at("envelopes").end(); ++it) {
                FleetClass cls = fleet_class_from_string(it.key());
                s.envelopes[cls] = parse_envelope(it.value(), cls, "protection.envelopes." + it.key());
            }
        }
        if (jp.contains("fleet")) {
            for (const auto& jf : jp.at("fleet")) {
                s.protection_fleet.emplace_back(
                    require(jf, "id", "protection.fleet").get<std::string>(),
                    fleet_class_from_string(require(jf, "class", "protection.fleet").get<std::string>()));
            }
        }
    }

    if (j.contains("dispatch")) {
        s.dispatch_target_mw = num_or(j.at("dispatch"), "target_mw", 0.0, "dispatch");
    }

    s.validate();
    log_info("loaded scenario '" + s.name + "' from " + path);
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json jnodes = json::array();
    for (size_t i = 0; i < s.network.nodes.size(); ++i) {
        const BasinNode& node = s.network.nodes[i];
        json jn{
            {"id", node.node_id},
            {"kind", to_string(node.kind)},
            {"elevation_unit", to_string(node.elevation_unit)},
            {"tailwater_elevation", node.tailwater_elevation},
            {"min_storage_m3", node.min_storage_m3},
            {"max_storage_m3", node.max_storage_m3},
            {"initial_storage_m3", node.initial_storage_m3},
            {"min_environmental_flow_m3s", node.min_environmental_flow_m3s},
            {"min_generation_mw", node.min_generation_mw},
        };
        if (!node.storage_elevation_table.empty()) {
            json table = json::array();
            for (const auto& [sm3, elev] : node.storage_elevation_table)
                table.push_back(json::array({sm3, elev}));
            jn["storage_elevation_table"] = table;
        }
        if (node.forebay_elevation) jn["forebay_elevation"] = *node.forebay_elevation;
        json junits = json::array();
        for (size_t u = 0; u < node.plant.size(); ++u) {
            json ju = unit_to_json(node.plant[u]);
            ju["governor"] = governor_to_json(s.governors[i][u]);
            ju["initial_power_mw"] = s.initial_power_mw[i][u];
            if (s.initial_head_pu[i][u]) ju["initial_head_pu"] = *s.initial_head_pu[i][u];
            junits.push_back(std::move(ju));
        }
        jn["units"] = std::move(junits);
        jnodes.push_back(std::move(jn));
    }
    json jreaches = json::array();
    for (const auto& r : s.network.reaches)
        jreaches.push_back(json{{"from", r.from_node}, {"to", r.to_node},
                                {"travel_time_s", r.travel_time_s}});

    json jwater{{"condition", s.water.condition}, {"routing_horizon", s.water.routing_horizon}};
    if (!s.water.forebay_csv.empty()) {
        jwater["forebay_csv"] = s.water.forebay_csv;
        jwater["csv_node_id"] = s.water.csv_node_id;
        jwater["csv_unit"] = to_string(s.water.csv_unit);
        jwater["tailwater_default"] = s.water.tailwater_default;
    }
    if (!s.water.inflows_m3s.empty()) jwater["inflows_m3s"] = node_series_to_json(s.water.inflows_m3s);
    if (!s.water.releases_m3s.empty())
        jwater["releases_m3s"] = node_series_to_json(s.water.releases_m3s);

    json jufls = json::array();
    for (const auto& stage : s.grid.ufls)
        jufls.push_back(json{{"threshold_hz", stage.threshold_hz},
                             {"shed_fraction", stage.shed_fraction}});

    json jenv = json::object();
    for (const auto& [cls, env] : s.envelopes) jenv[to_string(cls)] = envelope_to_json(env);
    json jfleet = json::array();
    for (const auto& [id, cls] : s.protection_fleet)
        jfleet.push_back(json{{"id", id}, {"class", to_string(cls)}});

    json out{
        {"name", s.name},
        {"network", json{{"nodes", jnodes}, {"reaches", jreaches}}},
        {"water", jwater},
        {"grid",
         json{{"system_base_mva", s.grid.system_base_mva},
              {"f_nominal_hz", s.grid.f_nominal_hz},
              {"load_damping_d", s.grid.load_damping_d},
              {"nonresponsive_mw", s.grid.nonresponsive_mw},
              {"nonresponsive_inertia_mws", s.grid.nonresponsive_inertia_mws},
              {"ufls", jufls}}},
        {"event", json{{"t0_s", s.event.t0_s}, {"loss_mw", s.event.loss_mw}}},
        {"solver",
         json{{"dt_s", s.solver.dt_s},
              {"duration_s", s.solver.duration_s},
              {"resolution_mw", s.solver.resolution_mw},
              {"routing_dt_s", s.solver.routing_dt_s}}},
        {"protection", json{{"envelopes", jenv}, {"fleet", jfleet}}},
    };
    if (s.dispatch_target_mw) out["dispatch"] = json{{"target_mw", *s.dispatch_target_mw}};
    return out.dump(2) + "\n";
}

} // namespace hydrosim
