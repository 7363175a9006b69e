#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shl {

// Comma-separated table with a one-line header. Values are printed with
// round-trip precision.
struct SeriesTable {
    std::vector<std::string> header;  // first column is "timestamp_s"
    std::vector<double> timestamps;
    Eigen::MatrixXd values;           // rows x (header.size() - 1)
};

void write_series_csv(const std::filesystem::path& path, const SeriesTable& table);
SeriesTable read_series_csv(const std::filesystem::path& path);

std::string format_double(double v);
std::string format_float(float v);

// Splits one line on commas; no quoting support.
std::vector<std::string> split_csv_line(const std::string& line);

// Parses a floating point number or throws ParseError naming the context.
double parse_double(const std::string& s, const std::string& context);

}  // namespace shl
