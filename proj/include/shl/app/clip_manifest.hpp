#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "shl/clipper/clipper.hpp"

namespace shl::app {

struct ClipRecord {
    std::string video_id;
    HighlightClip clip;

    bool operator==(const ClipRecord&) const = default;
};

// JSON Lines: a header object, then one object per clip in time order with
// video_id, start_s, end_s, apexes_s and an optional category. Throws
// InvariantError for overlapping or malformed clips.
std::string format_clip_manifest(const std::vector<ClipRecord>& records);
std::string format_clip_manifest(const std::string& video_id, const std::vector<HighlightClip>& clips);
void export_clip_manifest(const std::filesystem::path& path, const std::vector<ClipRecord>& records);

std::vector<ClipRecord> parse_clip_manifest(const std::string& text);
std::vector<ClipRecord> load_clip_manifest(const std::filesystem::path& path);

}  // namespace shl::app
