#include "shl/ingest/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shl/core/error.hpp"

namespace shl {

std::size_t sampled_frame_count(double duration, double rate) {
    if (!(rate > 0.0)) throw ConfigError("sampling rate must be positive");
    if (!(duration > 0.0)) return 0;
    return static_cast<std::size_t>(std::floor(duration * rate + 1e-9));
}

std::size_t nearest_native_frame(double t, double native_fps, std::size_t native_count) {
    if (native_count == 0) return 0;
    const auto idx = static_cast<long long>(std::llround(t * native_fps));
    return static_cast<std::size_t>(
        std::clamp<long long>(idx, 0, static_cast<long long>(native_count) - 1));
}

FrameSeries sample_frames(const StreamRecording& recording, double rate) {
    FrameSeries series;
    series.rate = rate;
    for_each_sampled_frame(recording, rate, [&](std::size_t, double t, const Image& frame) {
        series.frames.push_back(frame);
        series.timestamps.push_back(t);
    });
    return series;
}

void validate_region(const RegionSpec& r, int frame_width, int frame_height) {
    if (r.width <= 0 || r.height <= 0) throw ConfigError("face region must have positive size");
    if (r.x < 0 || r.y < 0 || r.x + r.width > frame_width || r.y + r.height > frame_height) {
        throw ConfigError("face region (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
                          std::to_string(r.width) + "," + std::to_string(r.height) +
                          ") lies outside the " + std::to_string(frame_width) + "x" +
                          std::to_string(frame_height) + " frame");
    }
}

Image crop(const Image& frame, const RegionSpec& region) {
    validate_region(region, frame.width(), frame.height());
    Image out(region.width, region.height, frame.channels());
    for (int y = 0; y < region.height; ++y)
        for (int x = 0; x < region.width; ++x)
            for (int c = 0; c < frame.channels(); ++c)
                out.at(x, y, c) = frame.at(region.x + x, region.y + y, c);
    return out;
}

Image mask_region(const Image& frame, const RegionSpec& region, float fill) {
    validate_region(region, frame.width(), frame.height());
    Image out = frame;
    for (int y = region.y; y < region.y + region.height; ++y)
        for (int x = region.x; x < region.x + region.width; ++x)
            for (int c = 0; c < frame.channels(); ++c) out.at(x, y, c) = fill;
    return out;
}

ViewPair split_views(const Image& frame, const RegionSpec& region, int output_size) {
    if (output_size <= 0) throw ConfigError("output frame size must be positive");
    if (frame.channels() != 3) throw InputError("expected a 3-channel frame");
    return {resize_bilinear(crop(frame, region), output_size, output_size),
            resize_bilinear(mask_region(frame, region), output_size, output_size)};
}

namespace {

std::size_t window_samples_for(int sample_rate) {
    return static_cast<std::size_t>(
        std::llround(AudioWindowSeries::kWindowSeconds * sample_rate));
}

std::size_t hop_samples_for(int sample_rate) {
    return static_cast<std::size_t>(std::llround(AudioWindowSeries::kHopSeconds * sample_rate));
}

}  // namespace

std::size_t audio_window_count(std::size_t samples, int sample_rate) {
    if (sample_rate <= 0) throw InputError("audio sample rate must be positive");
    const std::size_t window = window_samples_for(sample_rate);
    const std::size_t hop = hop_samples_for(sample_rate);
    if (samples < window) return 0;
    return (samples - window) / hop + 1;
}

AudioWindowSeries window_audio(std::shared_ptr<const AudioSignal> signal) {
    if (!signal) throw ViewUnavailable("no audio signal");
    if (signal->sample_rate < 8000)
        throw ConfigError("audio sample rate " + std::to_string(signal->sample_rate) +
                          " Hz is below 8000 Hz");
    const int rate = signal->sample_rate;
    const std::size_t count = audio_window_count(signal->samples.size(), rate);
    return AudioWindowSeries(std::move(signal), window_samples_for(rate), hop_samples_for(rate),
                             count);
}

std::size_t align_timelines(std::optional<std::size_t> face, std::optional<std::size_t> game,
                            std::optional<std::size_t> audio) {
    std::optional<std::size_t> length;
    for (const auto& n : {face, game, audio}) {
        if (n) length = length ? std::min(*length, *n) : *n;
    }
    if (!length) throw PipelineError("ingest", "no views present");
    return *length;
}

void align_views(IngestedViews& views) {
    auto len = [](const auto& opt) -> std::optional<std::size_t> {
        if (opt) return opt->size();
        return std::nullopt;
    };
    views.length = align_timelines(len(views.face), len(views.game), len(views.audio));
    if (views.face) views.face->truncate(views.length);
    if (views.game) views.game->truncate(views.length);
    if (views.audio) views.audio->truncate(views.length);
}

IngestedViews ingest_recording(const StreamRecording& recording, const IngestOptions& options) {
    if (!(recording.duration > 0.0)) throw InputError("recording has no duration");
    IngestedViews views;
    if (options.want_face || options.want_game) {
        FrameSeries face{ViewId::face, options.rate, {}, {}};
        FrameSeries game{ViewId::game, options.rate, {}, {}};
        for_each_sampled_frame(recording, options.rate, [&](std::size_t, double t, const Image& frame) {
            ViewPair pair = split_views(frame, options.region, options.frame_size);
            if (options.want_face) {
                face.frames.push_back(std::move(pair.face));
                face.timestamps.push_back(t);
            }
            if (options.want_game) {
                game.frames.push_back(std::move(pair.game));
                game.timestamps.push_back(t);
            }
        });
        if (options.want_face) views.face = std::move(face);
        if (options.want_game) views.game = std::move(game);
    }
    if (options.want_audio) {
        const auto& path = recording.audio_path.empty() ? recording.video_path : recording.audio_path;
        try {
            views.audio = window_audio(std::make_shared<AudioSignal>(decode_audio(path)));
        } catch (const ViewUnavailable&) {
            views.audio.reset();
        }
    }
    align_views(views);
    return views;
}

}  // namespace shl
