#pragma once

#include <filesystem>
#include <memory>
#include <span>

#include "shl/core/image.hpp"
#include "shl/ingest/types.hpp"

namespace shl {

// Motion-JPEG AVI writer used to materialize synthetic recordings.
class VideoWriter {
public:
    VideoWriter(const std::filesystem::path& path, int width, int height, double fps);
    ~VideoWriter();
    VideoWriter(const VideoWriter&) = delete;
    VideoWriter& operator=(const VideoWriter&) = delete;

    void write(const Image& frame);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// 16-bit PCM mono WAV.
void write_wav(const std::filesystem::path& path, const AudioSignal& signal);

}  // namespace shl
