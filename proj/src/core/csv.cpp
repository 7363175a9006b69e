#include "shl/core/csv.hpp"

#include <charconv>
#include <fstream>

#include "shl/core/error.hpp"

namespace shl {

std::string format_double(double v) {
    // shortest text that parses back to the same double
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_float(float v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError(context + ": '" + s + "' is not a number");
    return v;
}

void write_series_csv(const std::filesystem::path& path, const SeriesTable& table) {
    const auto cols = static_cast<std::size_t>(table.values.cols());
    if (table.header.size() != cols + 1) throw InputError("series header does not match column count");
    if (table.timestamps.size() != static_cast<std::size_t>(table.values.rows()))
        throw InputError("series timestamps do not match row count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
    out << '\n';
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        out << format_double(table.timestamps[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < table.values.cols(); ++c) out << ',' << format_double(table.values(r, c));
        out << '\n';
    }
    if (!out) throw Error("failed writing " + path.string());
}

SeriesTable read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    SeriesTable t;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header");
    t.header = split_csv_line(line);
    if (t.header.size() < 2) throw ParseError(path.string() + ": need a timestamp and at least one value column");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != t.header.size())
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_double(f, path.string() + ":" + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    const auto cols = static_cast<Eigen::Index>(t.header.size() - 1);
    t.values.resize(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        t.timestamps.push_back(rows[r][0]);
        for (Eigen::Index c = 0; c < cols; ++c)
            t.values(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c) + 1];
    }
    return t;
}

}  // namespace shl
