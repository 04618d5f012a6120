#include "hydrosim/telemetry.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "hydrosim/csv.hpp"
#include "hydrosim/errors.hpp"
#include "hydrosim/hydro_physics.hpp"

namespace hydrosim {

namespace {

bool all_digits(const std::string& s, size_t from, size_t to) {
    if (to > s.size()) return false;
    for (size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

/// ISO-8601 date or date-time to a sortable key (seconds-like scale; months
/// and days treated as fixed width, which preserves ordering).
long long timestamp_key(const std::string& ts, int row) {
    auto bad = [&]() -> long long {
        throw MalformedRowError(row, "row " + std::to_string(row) + ": bad timestamp '" + ts + "'");
    };
    if (ts.size() < 10 || !all_digits(ts, 0, 4) || ts[4] != '-' || !all_digits(ts, 5, 7) ||
        ts[7] != '-' || !all_digits(ts, 8, 10))
        return bad();
    long long year = std::stoll(ts.substr(0, 4));
    long long month = std::stoll(ts.substr(5, 2));
    long long day = std::stoll(ts.substr(8, 2));
    if (month < 1 || month > 12 || day < 1 || day > 31) return bad();
    long long key = ((year * 12 + month) * 31 + day) * 86400;
    if (ts.size() == 10) return key;
    if (ts.size() < 19 || (ts[10] != 'T' && ts[10] != ' ') || !all_digits(ts, 11, 13) ||
        ts[13] != ':' || !all_digits(ts, 14, 16) || ts[16] != ':' || !all_digits(ts, 17, 19))
        return bad();
    long long hh = std::stoll(ts.substr(11, 2));
    long long mm = std::stoll(ts.substr(14, 2));
    long long ss = std::stoll(ts.substr(17, 2));
    if (hh > 23 || mm > 59 || ss > 60) return bad();
    return key + hh * 3600 + mm * 60 + ss;
}

double parse_number(const std::string& field, int row) {
    const char* begin = field.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw MalformedRowError(row, "row " + std::to_string(row) + ": bad number '" + field + "'");
    return v;
}

} // namespace

TelemetrySeries ingest_forebay_csv(const std::string& path, Length tailwater_default) {
    CsvTable table = read_csv(path);
    if (table.header.size() < 2 || table.header.size() > 3 || table.header[0] != "timestamp" ||
        table.header[1] != "forebay" || (table.header.size() == 3 && table.header[2] != "tailwater"))
        throw ParseError("'" + path + "': expected header timestamp,forebay[,tailwater]");
    if (table.rows.empty()) throw EmptySeriesError("'" + path + "' has no data rows");

    TelemetrySeries series;
    series.unit = tailwater_default.unit;
    std::vector<bool> forebay_missing;

    long long prev_key = 0;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const int row_num = static_cast<int>(r) + 2;  // 1-based, after the header
        if (row.size() != table.header.size())
            throw MalformedRowError(row_num, "row " + std::to_string(row_num) + ": expected " +
                                                 std::to_string(table.header.size()) + " fields, got " +
                                                 std::to_string(row.size()));
        long long key = timestamp_key(row[0], row_num);
        if (r > 0 && key <= prev_key)
            throw MalformedRowError(row_num,
                                    "row " + std::to_string(row_num) + ": timestamps must be strictly increasing");
        prev_key = key;
        series.timestamps.push_back(row[0]);

        if (row[1].empty()) {
            forebay_missing.push_back(true);
            series.forebay.push_back(0.0);
        } else {
            forebay_missing.push_back(false);
            series.forebay.push_back(parse_number(row[1], row_num));
        }
        double tw = tailwater_default.value;
        if (row.size() == 3 && !row[2].empty()) tw = parse_number(row[2], row_num);
        series.tailwater.push_back(tw);
    }

    // Gap policy: interior gaps linearly interpolated between the nearest
    // present samples; leading/trailing gaps take the nearest value.
    const size_t n = series.size();
    size_t first_present = n, last_present = n;
    for (size_t i = 0; i < n; ++i) {
        if (!forebay_missing[i]) {
            if (first_present == n) first_present = i;
            last_present = i;
        }
    }
    if (first_present == n) throw EmptySeriesError("'" + path + "' has no forebay values");
    for (size_t i = 0; i < first_present; ++i) series.forebay[i] = series.forebay[first_present];
    for (size_t i = last_present + 1; i < n; ++i) series.forebay[i] = series.forebay[last_present];
    size_t left = first_present;
    for (size_t i = first_present + 1; i <= last_present; ++i) {
        if (forebay_missing[i]) continue;
        for (size_t j = left + 1; j < i; ++j) {
            double w = static_cast<double>(j - left) / static_cast<double>(i - left);
            series.forebay[j] = series.forebay[left] * (1.0 - w) + series.forebay[i] * w;
        }
        left = i;
    }

    series.head.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Length fb{series.forebay[i], series.unit};
        Length tw{series.tailwater[i], series.unit};
        series.head.push_back(compute_head(fb, tw).value);
    }
    return series;
}

} // namespace hydrosim
