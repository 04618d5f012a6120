#ifndef HYDROSIM_UNITS_HPP
#define HYDROSIM_UNITS_HPP

#include <string>

#include "hydrosim/errors.hpp"

namespace hydrosim {

enum class LengthUnit { Feet, Meters };

constexpr double kFeetPerMeter = 1.0 / 0.3048;
constexpr double kMetersPerFoot = 0.3048;

inline const char* to_string(LengthUnit u) {
    return u == LengthUnit::Feet ? "ft" : "m";
}

inline LengthUnit length_unit_from_string(const std::string& s) {
    if (s == "ft" || s == "feet") return LengthUnit::Feet;
    if (s == "m" || s == "meters" || s == "metres") return LengthUnit::Meters;
    throw ValidationError("unknown length unit '" + s + "' (expected ft or m)");
}

/// A length carrying its unit tag. Elevations and heads in scenario files may
/// be given in feet or meters; hydraulic math converts to SI at the point of use.
struct Length {
    double value = 0.0;
    LengthUnit unit = LengthUnit::Meters;

    static Length feet(double v) { return {v, LengthUnit::Feet}; }
    static Length meters(double v) { return {v, LengthUnit::Meters}; }

    double in_meters() const {
        return unit == LengthUnit::Feet ? value * kMetersPerFoot : value;
    }
    double in(LengthUnit u) const {
        if (u == unit) return value;
        return u == LengthUnit::Meters ? value * kMetersPerFoot : value * kFeetPerMeter;
    }
};

} // namespace hydrosim

#endif
