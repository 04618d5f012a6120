#include "hydrosim/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hydrosim/errors.hpp"

namespace hydrosim {

std::string format_float(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw PreconditionError("csv row width " + std::to_string(row.size()) +
                                " does not match header width " + std::to_string(header.size()));
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw Error("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw EmptySeriesError("'" + path + "' is empty");
    table.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split_csv_line(line));
    }
    return table;
}

} // namespace hydrosim
