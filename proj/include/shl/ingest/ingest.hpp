#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "shl/ingest/types.hpp"

namespace shl {

inline constexpr double kDefaultFrameRate = 10.0;
inline constexpr int kProductionFrameSize = 224;
inline constexpr float kMaskFill = 0.0f;

// floor(duration * rate), tolerant to rounding in the product.
std::size_t sampled_frame_count(double duration, double rate);

// Index of the native frame nearest to timestamp t.
std::size_t nearest_native_frame(double t, double native_fps, std::size_t native_count);

// Opens the video and (optionally) audio file and fills in duration, frame
// rate and sample rate. Missing audio leaves audio_sample_rate at 0.
StreamRecording probe_recording(const std::filesystem::path& video,
                                const std::filesystem::path& audio = {});

using FrameVisitor = std::function<void(std::size_t index, double timestamp, const Image& frame)>;

// Streams frames i/rate (nearest native frame) through the visitor without
// holding the whole video in memory.
void for_each_sampled_frame(const StreamRecording& recording, double rate, const FrameVisitor& visit);

// Collecting variant of for_each_sampled_frame, full native resolution.
FrameSeries sample_frames(const StreamRecording& recording, double rate);

void validate_region(const RegionSpec& region, int frame_width, int frame_height);

Image crop(const Image& frame, const RegionSpec& region);

// Copy of the frame with the region replaced by a constant fill.
Image mask_region(const Image& frame, const RegionSpec& region, float fill = kMaskFill);

struct ViewPair {
    Image face;
    Image game;
};

ViewPair split_views(const Image& frame, const RegionSpec& region,
                     int output_size = kProductionFrameSize);

// max(0, floor((n - window) / hop) + 1) windows of 400 ms every 100 ms.
std::size_t audio_window_count(std::size_t samples, int sample_rate);

AudioWindowSeries window_audio(std::shared_ptr<const AudioSignal> signal);

// Decodes the first audio stream, averaging channels to mono. Throws
// ViewUnavailable when the file carries no audio stream.
AudioSignal decode_audio(const std::filesystem::path& path);

// Sample rate of the first audio stream, 0 when there is none.
int probe_audio_sample_rate(const std::filesystem::path& path);

// Common length T over the present views; throws PipelineError when none is
// present.
std::size_t align_timelines(std::optional<std::size_t> face, std::optional<std::size_t> game,
                            std::optional<std::size_t> audio);

struct IngestOptions {
    double rate = kDefaultFrameRate;
    int frame_size = kProductionFrameSize;
    RegionSpec region;
    bool want_face = true;
    bool want_game = true;
    bool want_audio = true;
};

struct IngestedViews {
    std::optional<FrameSeries> face;
    std::optional<FrameSeries> game;
    std::optional<AudioWindowSeries> audio;
    std::size_t length = 0;  // common timeline length after alignment
};

// Decodes and splits a recording into aligned views. A missing audio track
// drops the audio view instead of failing.
IngestedViews ingest_recording(const StreamRecording& recording, const IngestOptions& options);

// Truncates every present view to the common timeline length.
void align_views(IngestedViews& views);

}  // namespace shl
