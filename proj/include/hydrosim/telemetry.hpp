#ifndef HYDROSIM_TELEMETRY_HPP
#define HYDROSIM_TELEMETRY_HPP

#include <string>
#include <vector>

#include "hydrosim/units.hpp"

namespace hydrosim {

/// Forebay/tailwater elevation telemetry, e.g. exported reservoir gauge
/// records. One head sample per timestamp.
struct TelemetrySeries {
    std::vector<std::string> timestamps;  // ISO-8601, strictly increasing
    std::vector<double> forebay;          // in `unit`
    std::vector<double> tailwater;        // in `unit`
    std::vector<double> head;             // forebay - tailwater, in `unit`
    LengthUnit unit = LengthUnit::Meters;

    size_t size() const { return timestamps.size(); }
};

/// Parses `timestamp,forebay[,tailwater]` CSV. Rows without a tailwater
/// value use the default; missing forebay values are filled by linear
/// interpolation between neighbors (endpoints take the nearest value).
/// MalformedRowError carries the offending row number (1-based, header = 1).
TelemetrySeries ingest_forebay_csv(const std::string& path, Length tailwater_default);

} // namespace hydrosim

#endif
