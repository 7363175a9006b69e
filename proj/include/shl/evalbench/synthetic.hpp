#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "shl/ingest/types.hpp"

namespace shl::evalbench {

struct PlantedEvent {
    double time = 0.0;  // seconds
    std::vector<ViewId> views;
    double magnitude = 1.0;
};

struct SyntheticStreamSpec {
    double duration = 120.0;
    int frame_size = 64;
    double frame_rate = 10.0;
    int sample_rate = 16000;
    int base_patterns = 4;         // per visual view, cycled every pattern_period
    double pattern_period = 2.0;   // seconds
    double frame_noise = 0.02;
    double tone_hz = 440.0;
    double tone_amplitude = 0.2;
    double audio_noise = 0.01;
    double burst_hz = 1000.0;
    double burst_amplitude = 0.5;
    double event_length = 1.0;     // seconds
    std::vector<PlantedEvent> events;
    std::uint64_t seed = 0;

    // Throws ConfigError for events outside [0, duration) or bad geometry.
    void validate() const;
};

struct SyntheticStream {
    FrameSeries face;
    FrameSeries game;
    std::shared_ptr<const AudioSignal> signal;
    AudioWindowSeries audio;
    std::vector<double> event_times;  // ground truth, ascending
};

// Deterministic for a given spec. Events replace the visual pattern of the
// affected views for event_length seconds and add a tone burst to audio.
SyntheticStream generate_synthetic_stream(const SyntheticStreamSpec& spec);

// Smooth base pattern k for a view, and a high-frequency pattern that never
// occurs in the base set. Both are deterministic in (view, k, seed).
Image base_pattern(ViewId view, int k, int size, std::uint64_t seed);
Image novel_pattern(ViewId view, int k, int size, std::uint64_t seed);

// The four-event, two-minute stream used by the end-to-end checks.
SyntheticStreamSpec reference_stream_spec(std::uint64_t seed = 7);

}  // namespace shl::evalbench
