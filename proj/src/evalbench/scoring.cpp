#include "shl/evalbench/scoring.hpp"

#include <algorithm>

#include "shl/core/error.hpp"

namespace shl::evalbench {

DetectionScore score_detection(const std::vector<HighlightClip>& clips, std::vector<double> events,
                               double tolerance) {
    if (tolerance < 0.0) throw ConfigError("tolerance must be non-negative");
    std::sort(events.begin(), events.end());
    std::vector<bool> used(clips.size(), false);
    DetectionScore s;
    for (double e : events) {
        std::size_t best = clips.size();
        for (std::size_t i = 0; i < clips.size(); ++i) {
            if (used[i]) continue;
            if (e < clips[i].start - tolerance || e > clips[i].end + tolerance) continue;
            if (best == clips.size() || clips[i].end < clips[best].end) best = i;
        }
        if (best != clips.size()) {
            used[best] = true;
            ++s.matched;
        }
    }
    const double m = static_cast<double>(s.matched);
    s.precision = clips.empty() ? 0.0 : m / static_cast<double>(clips.size());
    s.recall = events.empty() ? 1.0 : m / static_cast<double>(events.size());
    return s;
}

}  // namespace shl::evalbench
