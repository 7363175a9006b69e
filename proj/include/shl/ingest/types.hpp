#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shl/core/image.hpp"

namespace shl {

enum class ViewId { face, game, audio };

std::string_view view_name(ViewId view) noexcept;
std::optional<ViewId> parse_view(std::string_view name) noexcept;

struct StreamRecording {
    std::filesystem::path video_path;
    std::filesystem::path audio_path;  // may equal video_path
    double duration = 0.0;             // seconds
    double native_fps = 0.0;
    int audio_sample_rate = 0;  // 0 when the recording has no audio track
};

// Face-cam overlay rectangle in source pixels.
struct RegionSpec {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

struct FrameSeries {
    ViewId view = ViewId::face;
    double rate = 10.0;
    std::vector<Image> frames;
    std::vector<double> timestamps;

    std::size_t size() const noexcept { return frames.size(); }
    void truncate(std::size_t n);
};

// Mono audio buffer.
struct AudioSignal {
    std::vector<float> samples;
    int sample_rate = 0;

    double duration() const noexcept {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

// Overlapping fixed-length windows over one shared mono signal. Windows are
// views into the signal, so a 400 ms / 100 ms layout costs no extra copies.
class AudioWindowSeries {
public:
    static constexpr double kWindowSeconds = 0.4;
    static constexpr double kHopSeconds = 0.1;

    AudioWindowSeries() = default;
    AudioWindowSeries(std::shared_ptr<const AudioSignal> signal, std::size_t window_samples,
                      std::size_t hop_samples, std::size_t count);

    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::span<const float> window(std::size_t i) const;
    double timestamp(std::size_t i) const noexcept;
    std::vector<double> timestamps() const;

    int sample_rate() const noexcept { return signal_ ? signal_->sample_rate : 0; }
    std::size_t window_samples() const noexcept { return window_samples_; }
    std::size_t hop_samples() const noexcept { return hop_samples_; }
    double window_ms() const noexcept;
    double hop_ms() const noexcept;
    const std::shared_ptr<const AudioSignal>& signal() const noexcept { return signal_; }

    void truncate(std::size_t n) noexcept;

private:
    std::shared_ptr<const AudioSignal> signal_;
    std::size_t window_samples_ = 0;
    std::size_t hop_samples_ = 0;
    std::size_t count_ = 0;
};

}  // namespace shl
