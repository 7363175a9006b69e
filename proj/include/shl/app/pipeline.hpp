#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shl/app/config.hpp"
#include "shl/clipper/detect.hpp"
#include "shl/vision/autoencoder.hpp"

namespace shl::app {

inline constexpr const char* kSoftwareVersion = "streamhl 0.1.0";

// Collects files written and stage timings for the run manifest.
struct RunLog {
    std::filesystem::path dir;
    std::vector<std::string> artifacts;  // relative to dir, in write order
    std::vector<std::pair<std::string, double>> timings;

    std::filesystem::path add(const std::string& name);
};

struct SignalBundle {
    ViewSignals signals;
    std::vector<double> events;  // ground truth, synthetic source only
};

vision::AutoencoderSpec autoencoder_spec(const PipelineConfig& config);

// Ingest plus per-view novelty for the configured modalities. With a log,
// per-view series and weights are persisted to log->dir.
SignalBundle compute_signals(const PipelineConfig& config, RunLog* log = nullptr);

DetectionOptions detection_options(const PipelineConfig& config);

struct RunResult {
    std::vector<HighlightClip> clips;
    fusion::PredictionErrorSeries errors;
    std::vector<double> events;
    RunLog log;
};

// ingest -> novelty -> fusion -> clipper, persisting every stage. A failing
// stage leaves its predecessors' artifacts and a manifest marked failed,
// then rethrows as PipelineError naming the stage.
RunResult run_pipeline(const PipelineConfig& config);

}  // namespace shl::app
