#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "shl/audio/spectrum.hpp"
#include "shl/clipper/clipper.hpp"
#include "shl/evalbench/synthetic.hpp"
#include "shl/fusion/forecaster.hpp"
#include "shl/ingest/types.hpp"
#include "shl/simd/kernels.hpp"

namespace shl::app {

enum class Source { recording, synthetic };

struct PipelineConfig {
    Source source = Source::recording;
    std::string video_id;  // defaults to the video file stem, or "synthetic"
    std::filesystem::path video_path;
    std::filesystem::path audio_path;  // empty: take audio from the video file
    RegionSpec region;
    double frame_rate = 10.0;
    int frame_size = 224;
    std::vector<ViewId> modalities{ViewId::face, ViewId::game, ViewId::audio};

    std::string vision_stages = "vgg16";  // or "2x64,2x128,..." style list
    int vision_epochs = 10;
    int vision_batch = 16;
    std::filesystem::path face_encoder_weights;
    bool freeze_face_encoder = true;  // only used with face_encoder_weights
    simd::AdadeltaParams optimizer{};

    audio::BandSpec band;
    int pca_k = 1;

    int lstm_layers = 2;
    int hidden_units = 0;
    int fusion_epochs = 100;
    int bptt_window = 100;

    double fraction = clipper::kDefaultFraction;
    double pre_s = clipper::kPreSeconds;
    double post_s = clipper::kPostSeconds;

    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "streamhl_out";

    evalbench::SyntheticStreamSpec synthetic = evalbench::reference_stream_spec();

    bool wants(ViewId v) const noexcept;
    std::string resolved_video_id() const;

    // Throws ConfigError for out-of-range values and, for recordings,
    // missing input files.
    void validate() const;
};

// Every key understood by the parser, in snapshot order.
std::vector<std::string> config_keys();

// Applies one `key = value` assignment; throws ConfigError on unknown keys
// or malformed values.
void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const PipelineConfig& config, const std::string& key);

// Flat text file: `key = value` lines, `#` comments, blank lines ignored.
PipelineConfig parse_config(const std::string& text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

// Complete snapshot; parse_config(to_text(c)) reproduces c.
std::string to_text(const PipelineConfig& config);

// "20:face+audio,47:game+audio@0.8" -> planted events (magnitude after @).
std::vector<evalbench::PlantedEvent> parse_events(const std::string& text);
std::string format_events(const std::vector<evalbench::PlantedEvent>& events);

std::vector<ViewId> parse_modalities(const std::string& text);
std::string format_modalities(const std::vector<ViewId>& views);

}  // namespace shl::app
