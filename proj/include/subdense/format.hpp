#pragma once

// Locale-free number formatting, CSV tables and atomic file output.

#include <string>
#include <vector>

namespace subdense {

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);
/// Fixed significant digits (%.{digits}g semantics, "." decimal point).
std::string format_number(double v, int digits);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    /// Row with leading text cells; numbers follow.
    void add_row(const std::vector<std::string>& text, const std::vector<double>& values);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

/// Writes via a sibling temporary file and rename(2); "-" means stdout.
void write_atomic(const std::string& path, const std::string& content);
void write_atomic(const std::string& path, const std::vector<double>& little_endian_f64);

}  // namespace subdense
