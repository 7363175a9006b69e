#pragma once

#include <vector>

#include "shl/clipper/clipper.hpp"

namespace shl::evalbench {

struct DetectionScore {
    double precision = 0.0;
    double recall = 0.0;
    std::size_t matched = 0;
};

// One-to-one matching by time: events in ascending order each take the
// unmatched clip that contains them (widened by tolerance) and ends first.
// No clips gives precision 0; no events gives recall 1.
DetectionScore score_detection(const std::vector<HighlightClip>& clips, std::vector<double> events,
                               double tolerance);

}  // namespace shl::evalbench
