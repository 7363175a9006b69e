#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shl/audio/features.hpp"
#include "shl/clipper/clipper.hpp"
#include "shl/fusion/forecaster.hpp"
#include "shl/vision/novelty.hpp"

namespace shl {

// Per-view novelty signals of one recording, computed once and shared by
// every modality subset.
struct ViewSignals {
    std::optional<NoveltySeries> face;
    std::optional<NoveltySeries> game;
    std::optional<AudioFeatureSeries> audio;
    double duration = 0.0;

    bool has(ViewId v) const noexcept;
};

struct DetectionOptions {
    fusion::ForecasterSpec forecaster;
    fusion::ForecasterTrainOptions training;
    clipper::ClipperOptions clipper;
};

struct DetectionResult {
    fusion::FusedSeries fused;
    std::optional<fusion::Forecaster> forecaster;
    fusion::PredictionErrorSeries errors;
    clipper::ApexSet apexes;
    std::vector<HighlightClip> clips;
};

// Fuses the requested views, trains the forecaster and cuts clips. Stage
// failures are rethrown as PipelineError tagged fusion or clipper.
DetectionResult detect_highlights(const ViewSignals& signals, std::span<const ViewId> views,
                                  const DetectionOptions& options);

}  // namespace shl
