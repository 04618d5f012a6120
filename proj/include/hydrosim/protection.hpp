#ifndef HYDROSIM_PROTECTION_HPP
#define HYDROSIM_PROTECTION_HPP

#include <map>
#include <string>
#include <vector>

namespace hydrosim {

enum class FleetClass { Hydro, Steam, Gas, Nuclear };

const char* to_string(FleetClass c);
FleetClass fleet_class_from_string(const std::string& s);

/// One no-trip band: at most max_dwell_s of cumulative time outside
/// [f_low_hz, f_high_hz] over the evaluated trace. A band with zero dwell
/// trips on the first sample outside it. Infinite dwell = no limit.
struct EnvelopeBand {
    double max_dwell_s = 0.0;
    double f_low_hz = 0.0;
    double f_high_hz = 0.0;
};

/// Frequency ride-through envelope for a fleet class. Bands sorted by dwell;
/// longer permitted dwell requires a narrower (nested) frequency range, so
/// frequencies further from nominal always permit equal or shorter dwell.
struct RideThroughEnvelope {
    FleetClass fleet_class = FleetClass::Hydro;
    std::vector<EnvelopeBand> bands;

    void validate() const;
};

/// Shipped non-normative defaults reproducing the qualitative contrast of
/// wide hydro envelopes versus narrow steam envelopes. Users studying
/// standard compliance must supply official curve points.
std::map<FleetClass, RideThroughEnvelope> default_envelopes();

struct GeneratorTrip {
    std::string generator_id;
    FleetClass fleet_class = FleetClass::Hydro;
    bool tripped = false;
    double trip_time_s = 0.0;
    int violated_band = -1;  // index into the envelope's band list
};

struct TripReport {
    std::vector<GeneratorTrip> per_generator;
    std::map<FleetClass, int> tripped_by_class;
    std::map<FleetClass, int> total_by_class;

    bool any_tripped() const;
};

/// Applies each generator's class envelope to the trace, accumulating dwell
/// time outside every band and tripping at the first instant any band's
/// cumulative dwell is exceeded.
TripReport evaluate_ridethrough(const std::vector<double>& frequency_hz, double dt_s,
                                const std::vector<std::pair<std::string, FleetClass>>& fleet,
                                const std::map<FleetClass, RideThroughEnvelope>& envelopes);

} // namespace hydrosim

#endif
