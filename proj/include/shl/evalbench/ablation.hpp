#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shl/clipper/detect.hpp"
#include "shl/evalbench/scoring.hpp"

namespace shl::evalbench {

struct AblationSpec {
    std::vector<ViewId> views;  // non-empty, no duplicates

    // "Face, Game, Audio" for several views, "Face Only" for one.
    std::string label() const;
};

// Parses "face,audio" style lists; throws ConfigError on unknown or
// repeated names.
AblationSpec parse_ablation(const std::string& text);

// The five arms compared in the modality study.
std::vector<AblationSpec> standard_ablations();

struct AblationRow {
    AblationSpec spec;
    std::size_t apexes = 0;
    std::vector<HighlightClip> clips;
    std::optional<DetectionScore> score;  // when ground truth events are supplied
};

// Runs fusion and clipping once per arm over shared view signals. Errors are
// rethrown as PipelineError carrying the arm label.
std::vector<AblationRow> run_ablation(const ViewSignals& signals, const std::vector<AblationSpec>& ablations,
                                      const DetectionOptions& options, const std::vector<double>* events = nullptr,
                                      double tolerance = 2.0);

// label,clips,apexes[,precision,recall]
std::string render_ablation_table(const std::vector<AblationRow>& rows);

}  // namespace shl::evalbench
