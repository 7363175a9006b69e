#include "shl/evalbench/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shl/core/csv.hpp"
#include "shl/core/error.hpp"

namespace shl::evalbench {
namespace {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Non-empty lines after the header, which must match `expected`.
std::vector<std::vector<std::string>> table_rows(const std::string& text, const std::vector<std::string>& expected) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (!header) {
            if (fields != expected) throw ParseError("unexpected header on line " + std::to_string(lineno));
            header = true;
            continue;
        }
        if (fields.size() != expected.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(expected.size()) +
                             " fields");
        rows.push_back(std::move(fields));
    }
    return rows;
}

constexpr std::array<Category, 4> kAll{Category::funny, Category::action, Category::interaction, Category::none};

}  // namespace

std::vector<AnnotationRecord> parse_annotations(const std::string& text) {
    std::vector<AnnotationRecord> out;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return out;
    for (const auto& f : table_rows(text, {"video_id", "start_s", "end_s", "category"})) {
        AnnotationRecord r;
        r.video_id = f[0];
        if (r.video_id.empty()) throw ParseError("empty video id");
        r.start = parse_double(f[1], "start_s");
        r.end = parse_double(f[2], "end_s");
        if (!(r.start >= 0.0 && r.end > r.start)) throw ParseError("clip span must satisfy 0 <= start < end");
        r.category = parse_category(f[3]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
    return parse_annotations(read_text(path));
}

std::map<std::string, double> parse_durations(const std::string& text) {
    std::map<std::string, double> out;
    for (const auto& f : table_rows(text, {"video_id", "duration_s"})) {
        const double d = parse_double(f[1], "duration_s");
        if (!(d > 0.0)) throw ParseError("duration must be positive");
        out[f[0]] = d;
    }
    return out;
}

std::map<std::string, double> load_durations(const std::filesystem::path& path) {
    return parse_durations(read_text(path));
}

void check_spans(const std::vector<AnnotationRecord>& records, const std::map<std::string, double>& durations) {
    for (const auto& r : records) {
        const auto it = durations.find(r.video_id);
        if (it == durations.end()) throw InputError("no duration for video " + r.video_id);
        if (r.end > it->second) throw InputError("clip in " + r.video_id + " ends after the video");
    }
}

int CategoryCounts::highlights() const noexcept {
    return counts[0] + counts[1] + counts[2];
}

int CategoryCounts::clips() const noexcept { return highlights() + counts[3]; }

CategoryCounts& CategoryCounts::operator+=(const CategoryCounts& o) noexcept {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    return *this;
}

CategorySummary summarize_categories(const std::vector<AnnotationRecord>& records) {
    CategorySummary s;
    for (const auto& r : records) {
        auto it = std::find_if(s.videos.begin(), s.videos.end(), [&](const auto& v) { return v.first == r.video_id; });
        if (it == s.videos.end()) {
            s.videos.emplace_back(r.video_id, CategoryCounts{});
            it = s.videos.end() - 1;
        }
        ++it->second.counts[static_cast<std::size_t>(r.category)];
    }
    for (const auto& [id, c] : s.videos) s.total += c;
    return s;
}

std::string render_category_table(const CategorySummary& summary) {
    std::ostringstream out;
    out << "video,funny,action,interaction,highlight_total,none\n";
    auto row = [&](const std::string& name, const CategoryCounts& c) {
        out << name << ',' << c[Category::funny] << ',' << c[Category::action] << ',' << c[Category::interaction]
            << ',' << c.highlights() << ',' << c[Category::none] << '\n';
    };
    for (const auto& [id, c] : summary.videos) row(id, c);
    row("Total", summary.total);
    return out.str();
}

FractionRow fraction_row(const std::string& label, const CategoryCounts& counts) {
    FractionRow r;
    r.label = label;
    r.clips = counts.clips();
    if (r.clips == 0) return r;
    const double n = r.clips;
    r.funny = counts[Category::funny] / n;
    r.action = counts[Category::action] / n;
    r.interaction = counts[Category::interaction] / n;
    r.total = counts.highlights() / n;
    r.none = counts[Category::none] / n;
    return r;
}

std::string format_fraction(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string render_fraction_table(const std::vector<FractionRow>& rows) {
    std::ostringstream out;
    out << "modalities,clips,funny,action,interaction,total,none\n";
    for (const auto& r : rows) {
        out << '"' << r.label << "\"," << r.clips << ',' << format_fraction(r.funny) << ','
            << format_fraction(r.action) << ',' << format_fraction(r.interaction) << ',' << format_fraction(r.total)
            << ',' << format_fraction(r.none) << '\n';
    }
    return out.str();
}

int bin_index(double position, int bins) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    const double p = std::clamp(position, 0.0, 1.0);
    return std::min(bins - 1, static_cast<int>(std::floor(p * bins)));
}

namespace {

PositionHistogram empty_histogram(int bins) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    PositionHistogram h;
    h.bins = bins;
    for (Category c : kAll) h.counts[c].assign(static_cast<std::size_t>(bins), 0);
    return h;
}

double duration_of(const std::map<std::string, double>& durations, const std::string& id) {
    const auto it = durations.find(id);
    if (it == durations.end()) throw InputError("no duration for video " + id);
    return it->second;
}

}  // namespace

PositionHistogram highlights_over_time(const std::vector<HighlightClip>& clips,
                                       const std::vector<std::string>& video_ids,
                                       const std::map<std::string, double>& durations, int bins) {
    if (video_ids.size() != clips.size()) throw InputError("one video id per clip required");
    PositionHistogram h = empty_histogram(bins);
    for (std::size_t i = 0; i < clips.size(); ++i) {
        const double d = duration_of(durations, video_ids[i]);
        const double first = clips[i].apexes.empty() ? clips[i].start : clips[i].apexes.front();
        const Category c = clips[i].category.value_or(Category::none);
        ++h.counts[c][static_cast<std::size_t>(bin_index(first / d, bins))];
    }
    return h;
}

PositionHistogram highlights_over_time(const std::vector<AnnotationRecord>& records,
                                       const std::map<std::string, double>& durations, int bins) {
    std::vector<HighlightClip> clips;
    std::vector<std::string> ids;
    for (const auto& r : records) {
        HighlightClip c;
        c.start = r.start;
        c.end = r.end;
        // annotation files carry spans only; the apex sits pre seconds in
        c.apexes = {std::min(r.start + clipper::kPreSeconds, r.end)};
        c.category = r.category;
        clips.push_back(std::move(c));
        ids.push_back(r.video_id);
    }
    return highlights_over_time(clips, ids, durations, bins);
}

std::string render_histogram(const PositionHistogram& h) {
    std::ostringstream out;
    out << "category";
    for (int b = 0; b < h.bins; ++b) out << ",bin_" << b;
    out << '\n';
    for (const auto& [c, v] : h.counts) {
        out << category_name(c);
        for (int x : v) out << ',' << x;
        out << '\n';
    }
    return out.str();
}

}  // namespace shl::evalbench
