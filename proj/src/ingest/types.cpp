#include "shl/ingest/types.hpp"

#include <algorithm>

#include "shl/core/error.hpp"

namespace shl {

std::string_view view_name(ViewId view) noexcept {
    switch (view) {
        case ViewId::face: return "face";
        case ViewId::game: return "game";
        case ViewId::audio: return "audio";
    }
    return "unknown";
}

std::optional<ViewId> parse_view(std::string_view name) noexcept {
    if (name == "face") return ViewId::face;
    if (name == "game") return ViewId::game;
    if (name == "audio") return ViewId::audio;
    return std::nullopt;
}

void FrameSeries::truncate(std::size_t n) {
    if (n < frames.size()) frames.resize(n);
    if (n < timestamps.size()) timestamps.resize(n);
}

AudioWindowSeries::AudioWindowSeries(std::shared_ptr<const AudioSignal> signal,
                                     std::size_t window_samples, std::size_t hop_samples,
                                     std::size_t count)
    : signal_(std::move(signal)),
      window_samples_(window_samples),
      hop_samples_(hop_samples),
      count_(count) {
    if (count_ > 0) {
        if (!signal_ || hop_samples_ == 0 || window_samples_ == 0)
            throw InputError("audio window series without a signal");
        if ((count_ - 1) * hop_samples_ + window_samples_ > signal_->samples.size())
            throw InputError("audio windows exceed the signal length");
    }
}

std::span<const float> AudioWindowSeries::window(std::size_t i) const {
    if (i >= count_) throw InputError("audio window index out of range");
    return std::span<const float>(signal_->samples).subspan(i * hop_samples_, window_samples_);
}

double AudioWindowSeries::timestamp(std::size_t i) const noexcept {
    const int rate = sample_rate();
    return rate > 0 ? static_cast<double>(i * hop_samples_) / rate : 0.0;
}

std::vector<double> AudioWindowSeries::timestamps() const {
    std::vector<double> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = timestamp(i);
    return out;
}

double AudioWindowSeries::window_ms() const noexcept {
    const int rate = sample_rate();
    return rate > 0 ? 1000.0 * static_cast<double>(window_samples_) / rate : 0.0;
}

double AudioWindowSeries::hop_ms() const noexcept {
    const int rate = sample_rate();
    return rate > 0 ? 1000.0 * static_cast<double>(hop_samples_) / rate : 0.0;
}

void AudioWindowSeries::truncate(std::size_t n) noexcept { count_ = std::min(count_, n); }

}  // namespace shl
