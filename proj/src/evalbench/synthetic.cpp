#include "shl/evalbench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shl/core/error.hpp"
#include "shl/ingest/ingest.hpp"

namespace shl::evalbench {
namespace {

std::uint64_t mix(std::uint64_t seed, ViewId view, int k, std::uint64_t salt) {
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(view) * 0xBF58476D1CE4E5B9ull +
                      static_cast<std::uint64_t>(k) * 0x94D049BB133111EBull + salt;
    x ^= x >> 31;
    x *= 0xD6E8FEB86659FD39ull;
    return x ^ (x >> 29);
}

bool affects(const PlantedEvent& e, ViewId v) {
    return std::find(e.views.begin(), e.views.end(), v) != e.views.end();
}

// Index of the event active at time t for the view, or -1.
int active_event(const SyntheticStreamSpec& spec, ViewId v, double t) {
    for (std::size_t i = 0; i < spec.events.size(); ++i) {
        const auto& e = spec.events[i];
        if (affects(e, v) && t >= e.time && t < e.time + spec.event_length) return static_cast<int>(i);
    }
    return -1;
}

FrameSeries render_view(const SyntheticStreamSpec& spec, ViewId view, std::mt19937_64& rng) {
    std::vector<Image> bases;
    for (int k = 0; k < spec.base_patterns; ++k) bases.push_back(base_pattern(view, k, spec.frame_size, spec.seed));
    std::vector<Image> novel;
    for (std::size_t i = 0; i < spec.events.size(); ++i)
        novel.push_back(novel_pattern(view, static_cast<int>(i), spec.frame_size, spec.seed));

    FrameSeries fs;
    fs.view = view;
    fs.rate = spec.frame_rate;
    const std::size_t n = sampled_frame_count(spec.duration, spec.frame_rate);
    std::normal_distribution<float> noise(0.0f, static_cast<float>(spec.frame_noise));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.frame_rate;
        const auto k = static_cast<std::size_t>(std::floor(t / spec.pattern_period)) % bases.size();
        Image frame = bases[k];
        const int ev = active_event(spec, view, t);
        if (ev >= 0) {
            const float m = static_cast<float>(std::min(1.0, spec.events[static_cast<std::size_t>(ev)].magnitude));
            auto dst = frame.data();
            auto src = novel[static_cast<std::size_t>(ev)].data();
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = (1.0f - m) * dst[j] + m * src[j];
        }
        if (spec.frame_noise > 0.0)
            for (float& v : frame.data()) v = std::clamp(v + noise(rng), 0.0f, 1.0f);
        fs.frames.push_back(std::move(frame));
        fs.timestamps.push_back(t);
    }
    return fs;
}

}  // namespace

void SyntheticStreamSpec::validate() const {
    if (!(duration > 0.0)) throw ConfigError("synthetic duration must be positive");
    if (frame_size < 8) throw ConfigError("synthetic frame size must be at least 8");
    if (!(frame_rate > 0.0)) throw ConfigError("synthetic frame rate must be positive");
    if (sample_rate < 8000) throw ConfigError("synthetic sample rate must be at least 8000 Hz");
    if (base_patterns < 1) throw ConfigError("need at least one base pattern");
    if (!(pattern_period > 0.0) || !(event_length > 0.0)) throw ConfigError("periods must be positive");
    if (burst_hz >= sample_rate / 2.0 || tone_hz >= sample_rate / 2.0)
        throw ConfigError("tone frequencies must lie below Nyquist");
    for (const auto& e : events) {
        if (!(e.time >= 0.0 && e.time < duration))
            throw ConfigError("event at " + std::to_string(e.time) + " s lies outside the stream");
        if (!(e.magnitude > 0.0)) throw ConfigError("event magnitude must be positive");
        if (e.views.empty()) throw ConfigError("event affects no view");
    }
}

Image base_pattern(ViewId view, int k, int size, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, view, k, 1));
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    Image img(size, size, 3);
    const float s = static_cast<float>(size);
    if (view == ViewId::face) {
        // soft blob on a flat background
        const float bg[3] = {0.2f + 0.3f * u(rng), 0.2f + 0.3f * u(rng), 0.2f + 0.3f * u(rng)};
        const float fg[3] = {0.5f + 0.4f * u(rng), 0.4f + 0.4f * u(rng), 0.3f + 0.4f * u(rng)};
        const float cx = s * (0.35f + 0.3f * u(rng));
        const float cy = s * (0.35f + 0.3f * u(rng));
        const float r = s * (0.18f + 0.1f * u(rng));
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const float d2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r);
                const float w = std::exp(-d2);
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = bg[c] * (1.0f - w) + fg[c] * w;
            }
    } else {
        // low-frequency diagonal gradient
        const float a[3] = {u(rng), u(rng), u(rng)};
        const float b[3] = {u(rng), u(rng), u(rng)};
        const float angle = u(rng) * std::numbers::pi_v<float>;
        const float dx = std::cos(angle), dy = std::sin(angle);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const float p = 0.5f + 0.5f * std::sin(((x - s / 2) * dx + (y - s / 2) * dy) / s * 3.0f);
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = a[c] * (1.0f - p) + b[c] * p;
            }
    }
    return img;
}

Image novel_pattern(ViewId view, int k, int size, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, view, k, 2));
    std::uniform_int_distribution<int> cell_dist(2, 4);
    std::bernoulli_distribution coin(0.5);
    const int cell = cell_dist(rng);
    Image img(size, size, 3);
    const int cells = (size + cell - 1) / cell;
    std::vector<float> colors(static_cast<std::size_t>(cells * cells * 3));
    for (float& c : colors) c = coin(rng) ? 1.0f : 0.0f;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const auto idx = static_cast<std::size_t>(((y / cell) * cells + x / cell) * 3);
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = colors[idx + static_cast<std::size_t>(c)];
        }
    return img;
}

SyntheticStream generate_synthetic_stream(const SyntheticStreamSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    SyntheticStream out;
    out.face = render_view(spec, ViewId::face, rng);
    out.game = render_view(spec, ViewId::game, rng);

    auto signal = std::make_shared<AudioSignal>();
    signal->sample_rate = spec.sample_rate;
    const auto n = static_cast<std::size_t>(std::floor(spec.duration * spec.sample_rate + 1e-9));
    signal->samples.resize(n);
    std::normal_distribution<double> noise(0.0, spec.audio_noise);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate;
        double v = spec.tone_amplitude * std::sin(two_pi * spec.tone_hz * t);
        const int ev = active_event(spec, ViewId::audio, t);
        if (ev >= 0)
            v += spec.burst_amplitude * spec.events[static_cast<std::size_t>(ev)].magnitude *
                 std::sin(two_pi * spec.burst_hz * t);
        if (spec.audio_noise > 0.0) v += noise(rng);
        signal->samples[i] = static_cast<float>(v);
    }
    out.signal = signal;
    out.audio = window_audio(signal);

    for (const auto& e : spec.events) out.event_times.push_back(e.time);
    std::sort(out.event_times.begin(), out.event_times.end());
    return out;
}

SyntheticStreamSpec reference_stream_spec(std::uint64_t seed) {
    SyntheticStreamSpec spec;
    spec.seed = seed;
    spec.events = {
        {20.0, {ViewId::face, ViewId::audio}, 1.0},
        {47.0, {ViewId::game, ViewId::audio}, 1.0},
        {76.0, {ViewId::face, ViewId::game}, 1.0},
        {103.0, {ViewId::face, ViewId::game, ViewId::audio}, 1.0},
    };
    return spec;
}

}  // namespace shl::evalbench
