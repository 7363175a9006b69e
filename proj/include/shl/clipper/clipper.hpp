#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shl/fusion/forecaster.hpp"

namespace shl {

enum class Category { funny, action, interaction, none };

std::string category_name(Category c);
// Accepts funny, action, interaction, none; throws ParseError otherwise.
Category parse_category(const std::string& s);

struct HighlightClip {
    double start = 0.0;
    double end = 0.0;
    std::vector<double> apexes;  // member apex timestamps, ascending
    std::optional<Category> category;

    bool operator==(const HighlightClip&) const = default;
};

namespace clipper {

inline constexpr double kDefaultFraction = 0.0001;
inline constexpr double kPreSeconds = 10.0;
inline constexpr double kPostSeconds = 5.0;

struct ApexSet {
    std::vector<std::size_t> indices;  // ascending
    std::vector<double> timestamps;    // parallel to indices
    double fraction = 0.0;
    double threshold_value = 0.0;  // smallest selected error
};

// max(1, ceil(fraction * n)).
std::size_t apex_count(std::size_t n, double fraction);

// Top errors, ties toward earlier timesteps. Timestamps default to the index
// when the span is empty.
ApexSet select_apexes(std::span<const double> errors, std::span<const double> timestamps, double fraction);
ApexSet select_apexes(const fusion::PredictionErrorSeries& errors, double fraction);

using ApexGroup = std::vector<double>;

// Greedy chaining over sorted timestamps: next apex joins the current group
// when its gap to the group's last apex is below pre + post.
std::vector<ApexGroup> link_apexes(std::span<const double> times, double pre = kPreSeconds,
                                   double post = kPostSeconds);

std::vector<HighlightClip> clips_from_groups(const std::vector<ApexGroup>& groups, double duration,
                                             double pre = kPreSeconds, double post = kPostSeconds);

struct ClipperOptions {
    double fraction = kDefaultFraction;
    double pre = kPreSeconds;
    double post = kPostSeconds;
};

std::vector<HighlightClip> extract_clips(const fusion::PredictionErrorSeries& errors, double duration,
                                         const ClipperOptions& options = {});

}  // namespace clipper
}  // namespace shl
