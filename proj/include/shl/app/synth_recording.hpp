#pragma once

#include <filesystem>

#include "shl/evalbench/synthetic.hpp"
#include "shl/ingest/types.hpp"

namespace shl::app {

struct SyntheticRecording {
    std::filesystem::path video;   // MJPG AVI, game view left, face view right
    std::filesystem::path audio;   // 16-bit mono WAV
    std::filesystem::path events;  // time_s,views,magnitude
    RegionSpec region;             // face overlay inside the composite frame
};

// Renders a synthetic stream as an ordinary recording so the decode path can
// be exercised end to end.
SyntheticRecording write_synthetic_recording(const evalbench::SyntheticStreamSpec& spec,
                                             const std::filesystem::path& dir);

}  // namespace shl::app
