#include "hydrosim/protection.hpp"

#include <algorithm>
#include <cmath>

#include "hydrosim/errors.hpp"

namespace hydrosim {

const char* to_string(FleetClass c) {
    switch (c) {
        case FleetClass::Hydro: return "hydro";
        case FleetClass::Steam: return "steam";
        case FleetClass::Gas: return "gas";
        default: return "nuclear";
    }
}

FleetClass fleet_class_from_string(const std::string& s) {
    if (s == "hydro") return FleetClass::Hydro;
    if (s == "steam") return FleetClass::Steam;
    if (s == "gas") return FleetClass::Gas;
    if (s == "nuclear") return FleetClass::Nuclear;
    throw ValidationError("unknown fleet class '" + s + "'");
}

void RideThroughEnvelope::validate() const {
    if (bands.empty()) throw ValidationError("envelope needs at least one band");
    for (const auto& b : bands) {
        if (!(b.f_low_hz < b.f_high_hz))
            throw ValidationError("envelope band requires f_low < f_high");
        if (b.max_dwell_s < 0) throw ValidationError("band dwell must be >= 0");
    }
    // Nesting: a band allowing longer dwell must lie inside every band
    // allowing shorter dwell, so dwell is monotone in distance from nominal.
    auto sorted = bands;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const EnvelopeBand& a, const EnvelopeBand& b) {
                         return a.max_dwell_s < b.max_dwell_s;
                     });
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].f_low_hz < sorted[i - 1].f_low_hz ||
            sorted[i].f_high_hz > sorted[i - 1].f_high_hz)
            throw ValidationError("envelope bands must be nested: longer dwell => narrower band");
    }
}

std::map<FleetClass, RideThroughEnvelope> default_envelopes() {
    std::map<FleetClass, RideThroughEnvelope> env;
    env[FleetClass::Hydro] = {FleetClass::Hydro, {{0.0, 55.5, 66.0}, {600.0, 56.0, 64.0}}};
    env[FleetClass::Steam] = {FleetClass::Steam,
                              {{0.0, 57.5, 61.5}, {10.0, 58.5, 61.0}, {180.0, 59.0, 60.6}}};
    env[FleetClass::Gas] = {FleetClass::Gas,
                            {{0.0, 57.0, 62.0}, {30.0, 58.0, 61.2}, {240.0, 58.8, 60.8}}};
    env[FleetClass::Nuclear] = {FleetClass::Nuclear,
                                {{0.0, 58.0, 61.0}, {5.0, 58.8, 60.8}, {120.0, 59.2, 60.5}}};
    return env;
}

bool TripReport::any_tripped() const {
    for (const auto& g : per_generator)
        if (g.tripped) return true;
    return false;
}

TripReport evaluate_ridethrough(const std::vector<double>& frequency_hz, double dt_s,
                                const std::vector<std::pair<std::string, FleetClass>>& fleet,
                                const std::map<FleetClass, RideThroughEnvelope>& envelopes) {
    if (frequency_hz.empty()) throw PreconditionError("frequency trace must be non-empty");
    if (dt_s <= 0) throw PreconditionError("dt must be > 0");

    TripReport report;
    for (const auto& [gen_id, fleet_class] : fleet) {
        auto it = envelopes.find(fleet_class);
        if (it == envelopes.end())
            throw MissingEnvelopeError("no ride-through envelope for fleet class '" +
                                       std::string(to_string(fleet_class)) + "' (generator '" +
                                       gen_id + "')");
        const RideThroughEnvelope& env = it->second;
        env.validate();

        GeneratorTrip trip{gen_id, fleet_class, false, 0.0, -1};
        std::vector<double> dwell(env.bands.size(), 0.0);
        for (size_t s = 0; s < frequency_hz.size() && !trip.tripped; ++s) {
            double f = frequency_hz[s];
            for (size_t b = 0; b < env.bands.size(); ++b) {
                const EnvelopeBand& band = env.bands[b];
                if (f < band.f_low_hz || f > band.f_high_hz) {
                    dwell[b] += dt_s;
                    if (dwell[b] > band.max_dwell_s) {
                        trip.tripped = true;
                        trip.trip_time_s = s * dt_s;
                        trip.violated_band = static_cast<int>(b);
                        break;
                    }
                }
            }
        }
        report.total_by_class[fleet_class] += 1;
        if (trip.tripped) report.tripped_by_class[fleet_class] += 1;
        report.per_generator.push_back(std::move(trip));
    }
    return report;
}

} // namespace hydrosim
