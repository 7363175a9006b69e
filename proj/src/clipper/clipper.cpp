#include "shl/clipper/clipper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shl/core/error.hpp"

namespace shl {

std::string category_name(Category c) {
    switch (c) {
    case Category::funny: return "funny";
    case Category::action: return "action";
    case Category::interaction: return "interaction";
    case Category::none: return "none";
    }
    return "none";
}

Category parse_category(const std::string& s) {
    if (s == "funny") return Category::funny;
    if (s == "action") return Category::action;
    if (s == "interaction") return Category::interaction;
    if (s == "none") return Category::none;
    throw ParseError("unknown category '" + s + "'");
}

namespace clipper {

std::size_t apex_count(std::size_t n, double fraction) {
    const double raw = std::ceil(fraction * static_cast<double>(n) - 1e-9);
    const auto k = static_cast<std::size_t>(std::max(1.0, raw));
    return std::min(k, n);
}

ApexSet select_apexes(std::span<const double> errors, std::span<const double> timestamps, double fraction) {
    if (errors.empty()) throw InputError("cannot select apexes from an empty series");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("apex fraction must lie in (0, 1]");
    if (!timestamps.empty() && timestamps.size() != errors.size())
        throw InputError("timestamps and errors differ in length");
    for (double e : errors)
        if (std::isnan(e)) throw InputError("error series contains NaN");

    const std::size_t k = apex_count(errors.size(), fraction);
    std::vector<std::size_t> order(errors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (errors[a] != errors[b]) return errors[a] > errors[b];
                          return a < b;
                      });
    ApexSet set;
    set.fraction = fraction;
    set.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    set.threshold_value = errors[set.indices.back()];
    std::sort(set.indices.begin(), set.indices.end());
    for (std::size_t i : set.indices)
        set.timestamps.push_back(timestamps.empty() ? static_cast<double>(i) : timestamps[i]);
    return set;
}

ApexSet select_apexes(const fusion::PredictionErrorSeries& errors, double fraction) {
    return select_apexes(errors.values, errors.timestamps, fraction);
}

std::vector<ApexGroup> link_apexes(std::span<const double> times, double pre, double post) {
    std::vector<ApexGroup> groups;
    if (!std::is_sorted(times.begin(), times.end())) throw InputError("apex timestamps must be sorted");
    for (double t : times) {
        if (!groups.empty() && t - groups.back().back() < pre + post)
            groups.back().push_back(t);
        else
            groups.push_back({t});
    }
    return groups;
}

std::vector<HighlightClip> clips_from_groups(const std::vector<ApexGroup>& groups, double duration,
                                             double pre, double post) {
    std::vector<HighlightClip> clips;
    clips.reserve(groups.size());
    for (const ApexGroup& g : groups) {
        if (g.empty()) throw InputError("empty apex group");
        for (double t : g)
            if (t < 0.0 || t > duration) throw InputError("apex at " + std::to_string(t) + " s lies outside the video");
        HighlightClip c;
        c.start = std::max(0.0, g.front() - pre);
        c.end = std::min(duration, g.back() + post);
        c.apexes = g;
        if (!clips.empty() && c.start < clips.back().end)
            throw InputError("apex groups overlap or are unsorted");
        clips.push_back(std::move(c));
    }
    return clips;
}

std::vector<HighlightClip> extract_clips(const fusion::PredictionErrorSeries& errors, double duration,
                                         const ClipperOptions& options) {
    const ApexSet set = select_apexes(errors, options.fraction);
    return clips_from_groups(link_apexes(set.timestamps, options.pre, options.post), duration, options.pre,
                             options.post);
}

}  // namespace clipper
}  // namespace shl
