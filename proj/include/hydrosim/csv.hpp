#ifndef HYDROSIM_CSV_HPP
#define HYDROSIM_CSV_HPP

#include <string>
#include <vector>

namespace hydrosim {

/// Fixed 9-significant-digit float formatting so identical inputs produce
/// byte-identical output files.
std::string format_float(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string to_string() const;
};

/// Whole-file atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// Splits one CSV line on commas; no quoting (none of our formats need it).
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads a CSV file into header + rows; requires a header row.
CsvTable read_csv(const std::string& path);

} // namespace hydrosim

#endif
