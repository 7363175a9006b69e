#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "shl/clipper/clipper.hpp"

namespace shl::evalbench {

struct AnnotationRecord {
    std::string video_id;
    double start = 0.0;
    double end = 0.0;
    Category category = Category::none;
};

// Header `video_id,start_s,end_s,category`. Throws ParseError on unknown
// categories or malformed rows.
std::vector<AnnotationRecord> parse_annotations(const std::string& text);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);

// Per-video durations, header `video_id,duration_s`.
std::map<std::string, double> load_durations(const std::filesystem::path& path);
std::map<std::string, double> parse_durations(const std::string& text);

// Clip spans must lie within the video; throws InputError otherwise.
void check_spans(const std::vector<AnnotationRecord>& records, const std::map<std::string, double>& durations);

struct CategoryCounts {
    std::array<int, 4> counts{};  // indexed by Category

    int operator[](Category c) const noexcept { return counts[static_cast<std::size_t>(c)]; }
    int highlights() const noexcept;  // funny + action + interaction
    int clips() const noexcept;
    CategoryCounts& operator+=(const CategoryCounts& o) noexcept;
    bool operator==(const CategoryCounts&) const = default;
};

struct CategorySummary {
    std::vector<std::pair<std::string, CategoryCounts>> videos;  // first-appearance order
    CategoryCounts total;
};

CategorySummary summarize_categories(const std::vector<AnnotationRecord>& records);

// Per-video rows plus a Total row: video,funny,action,interaction,highlight_total,none
std::string render_category_table(const CategorySummary& summary);

// Category fractions of all clips, printed to two decimals.
struct FractionRow {
    std::string label;
    int clips = 0;
    double funny = 0, action = 0, interaction = 0, total = 0, none = 0;
};

FractionRow fraction_row(const std::string& label, const CategoryCounts& counts);
// modalities,clips,funny,action,interaction,total,none
std::string render_fraction_table(const std::vector<FractionRow>& rows);
std::string format_fraction(double v);

struct PositionHistogram {
    int bins = 10;
    std::map<Category, std::vector<int>> counts;
};

// First apex (clip start when no apexes are recorded) over video duration,
// right-closed at 1.0.
PositionHistogram highlights_over_time(const std::vector<HighlightClip>& clips,
                                       const std::vector<std::string>& video_ids,
                                       const std::map<std::string, double>& durations, int bins);
PositionHistogram highlights_over_time(const std::vector<AnnotationRecord>& records,
                                       const std::map<std::string, double>& durations, int bins);
int bin_index(double position, int bins);

// category,bin_0..bin_{n-1}
std::string render_histogram(const PositionHistogram& h);

}  // namespace shl::evalbench
