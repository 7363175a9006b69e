#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "shl/core/error.hpp"
#include "shl/ingest/ingest.hpp"
#include "shl/ingest/media.hpp"

using namespace shl;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "shl_test_ingest";
    fs::create_directories(dir);
    return dir;
}

// Writes a video whose frame i has gray level (i % 10) / 10 in every pixel.
fs::path write_ramp_video(const std::string& name, int frames, double fps) {
    const auto path = temp_dir() / name;
    VideoWriter w(path, 64, 48, fps);
    for (int i = 0; i < frames; ++i) w.write(Image(64, 48, 3, static_cast<float>(i % 10) / 10.0f));
    w.close();
    return path;
}

std::shared_ptr<AudioSignal> tone(double seconds, int rate, double hz = 440.0) {
    auto s = std::make_shared<AudioSignal>();
    s->sample_rate = rate;
    s->samples.resize(static_cast<std::size_t>(std::lround(seconds * rate)));
    for (std::size_t i = 0; i < s->samples.size(); ++i)
        s->samples[i] = static_cast<float>(0.5 * std::sin(2 * std::numbers::pi * hz * i / rate));
    return s;
}

}  // namespace

TEST_CASE("frame counts follow floor(duration x rate)") {
    CHECK(sampled_frame_count(2.0, 10.0) == 20);
    CHECK(sampled_frame_count(0.0, 10.0) == 0);
    CHECK(sampled_frame_count(19 * 60 + 30, 10.0) == 11700);
    CHECK(sampled_frame_count(0.3, 10.0) == 3);  // 0.3 * 10 is 2.9999999999999996
    CHECK(nearest_native_frame(0.1, 30.0, 100) == 3);
    CHECK(nearest_native_frame(0.05, 30.0, 100) == 2);  // 1.5 rounds up
    CHECK(nearest_native_frame(99.0, 30.0, 100) == 99);
}

TEST_CASE("sample_frames on a real container") {
    const auto path = write_ramp_video("ramp.avi", 60, 30.0);  // 2 s
    const auto rec = probe_recording(path);
    CHECK(rec.native_fps == doctest::Approx(30.0));
    CHECK(rec.duration == doctest::Approx(2.0));
    CHECK(rec.audio_sample_rate == 0);
    const auto fs10 = sample_frames(rec, 10.0);
    REQUIRE(fs10.size() == 20);
    for (std::size_t i = 0; i < fs10.size(); ++i) {
        CHECK(fs10.timestamps[i] == doctest::Approx(i / 10.0));
        // frame i/10 s is native frame 3i, gray level (3i % 10) / 10 up to codec loss
        const double expected = static_cast<double>((3 * i) % 10) / 10.0;
        CHECK(fs10.frames[i].at(32, 24, 0) == doctest::Approx(expected).epsilon(0.03).scale(1.0));
    }
    CHECK_THROWS_AS(sample_frames(rec, 60.0), ConfigError);
}

TEST_CASE("missing or corrupt video raises decode errors") {
    CHECK_THROWS_AS(probe_recording(temp_dir() / "does_not_exist.avi"), DecodeError);
    const auto junk = temp_dir() / "junk.avi";
    {
        std::ofstream out(junk, std::ios::binary);
        out << "definitely not a video";
    }
    CHECK_THROWS_AS(probe_recording(junk), DecodeError);
}

TEST_CASE("split_views on a uniform gray frame") {
    const Image gray(320, 240, 3, 0.5f);
    const RegionSpec region{200, 150, 100, 80};
    const auto v = split_views(gray, region, 64);
    CHECK(v.face.width() == 64);
    CHECK(v.face.height() == 64);
    for (float x : v.face.data()) REQUIRE(x == doctest::Approx(0.5f));
    // masked pixels pull the game frame down; unmasked corners keep the gray level
    CHECK(v.game.at(0, 0, 0) == doctest::Approx(0.5f));
    CHECK(v.game.at(50, 50, 0) == doctest::Approx(0.0f));
}

TEST_CASE("region covering the whole frame") {
    Image img(32, 32, 3);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = (x + y) / 62.0f;
    const auto v = split_views(img, {0, 0, 32, 32}, 16);
    CHECK(v.face == resize_bilinear(img, 16, 16));
    for (float x : v.game.data()) REQUIRE(x == 0.0f);
}

TEST_CASE("1080p frame with a bottom-right overlay: mask pixel count") {
    const Image frame(1920, 1080, 3, 0.8f);
    const RegionSpec region{1440, 810, 480, 270};
    const Image masked = mask_region(frame, region);
    std::size_t zeros = 0, kept = 0;
    for (int y = 0; y < 1080; ++y)
        for (int x = 0; x < 1920; ++x) {
            const bool inside = x >= 1440 && y >= 810;
            if (masked.at(x, y, 0) == 0.0f) ++zeros;
            if (!inside && masked.at(x, y, 0) == 0.8f) ++kept;
        }
    CHECK(zeros == 480u * 270u);
    CHECK(kept == 1920u * 1080u - 480u * 270u);
    const Image face = crop(frame, region);
    CHECK(face.width() == 480);
    CHECK(face.height() == 270);
    const auto v = split_views(frame, region);
    CHECK(v.face.width() == 224);
    CHECK(v.game.height() == 224);
}

TEST_CASE("regions outside the frame are rejected") {
    const Image frame(100, 100, 3);
    CHECK_THROWS_AS(validate_region({90, 0, 20, 10}, 100, 100), ConfigError);
    CHECK_THROWS_AS(validate_region({-1, 0, 20, 10}, 100, 100), ConfigError);
    CHECK_THROWS_AS(validate_region({0, 0, 0, 10}, 100, 100), ConfigError);
    CHECK_THROWS_AS(split_views(frame, {0, 95, 10, 10}, 32), ConfigError);
}

TEST_CASE("audio windows: 400 ms every 100 ms") {
    CHECK(audio_window_count(16000, 16000) == 7);
    CHECK(audio_window_count(4800, 16000) == 0);
    CHECK(audio_window_count(6400, 16000) == 1);
    auto sig = tone(1.0, 16000);
    const auto w = window_audio(sig);
    REQUIRE(w.size() == 7);
    CHECK(w.window_samples() == 6400);
    CHECK(w.window_ms() == doctest::Approx(400.0));
    CHECK(w.hop_ms() == doctest::Approx(100.0));
    CHECK(w.timestamp(6) == doctest::Approx(0.6));
    // consecutive windows share exactly 300 ms of samples
    const auto a = w.window(2), b = w.window(3);
    CHECK(std::equal(a.begin() + 1600, a.end(), b.begin()));
    CHECK(a.data() + 1600 == b.data());
    CHECK(window_audio(tone(0.3, 16000)).empty());
    CHECK_THROWS_AS(window_audio(tone(1.0, 4000)), ConfigError);
}

TEST_CASE("window count formula over many durations") {
    for (int ms = 0; ms <= 3000; ms += 37) {
        const std::size_t n = static_cast<std::size_t>(ms) * 16;
        const long expect = std::max(0L, static_cast<long>(std::floor((ms / 1000.0 - 0.4) / 0.1 + 1e-9)) + 1);
        CHECK(audio_window_count(n, 16000) == static_cast<std::size_t>(ms < 400 ? 0 : expect));
    }
}

TEST_CASE("align_timelines takes the minimum present length") {
    CHECK(align_timelines(11700, 11700, 11696) == 11696);
    CHECK(align_timelines(500, std::nullopt, std::nullopt) == 500);
    CHECK(align_timelines(42, 42, 42) == 42);
    CHECK_THROWS_AS(align_timelines(std::nullopt, std::nullopt, std::nullopt), PipelineError);
}

TEST_CASE("wav round trip and stereo-free decode") {
    auto sig = tone(0.5, 16000, 1000.0);
    const auto path = temp_dir() / "tone.wav";
    write_wav(path, *sig);
    CHECK(probe_audio_sample_rate(path) == 16000);
    const auto back = decode_audio(path);
    CHECK(back.sample_rate == 16000);
    REQUIRE(back.samples.size() == sig->samples.size());
    for (std::size_t i = 0; i < back.samples.size(); i += 97)
        CHECK(back.samples[i] == doctest::Approx(sig->samples[i]).epsilon(1e-3).scale(1.0));
}

TEST_CASE("video without an audio track drops the audio view") {
    const auto path = write_ramp_video("silent.avi", 30, 10.0);
    CHECK_THROWS_AS(decode_audio(path), ViewUnavailable);
    const auto rec = probe_recording(path);
    IngestOptions opts;
    opts.frame_size = 32;
    opts.region = {32, 0, 32, 24};
    const auto views = ingest_recording(rec, opts);
    CHECK_FALSE(views.audio.has_value());
    REQUIRE(views.face.has_value());
    REQUIRE(views.game.has_value());
    CHECK(views.length == 30);
    CHECK(views.face->timestamps == views.game->timestamps);
    for (const auto& f : views.face->frames)
        for (float v : f.data()) REQUIRE((v >= 0.0f && v <= 1.0f));
}

TEST_CASE("ingest aligns video and audio to a common length") {
    const auto video = write_ramp_video("av.avi", 20, 10.0);  // 2.0 s -> 20 frames
    auto sig = tone(2.0, 16000);                              // 17 windows
    const auto wav = temp_dir() / "av.wav";
    write_wav(wav, *sig);
    const auto rec = probe_recording(video, wav);
    CHECK(rec.audio_sample_rate == 16000);
    IngestOptions opts;
    opts.frame_size = 32;
    opts.region = {0, 0, 16, 16};
    const auto views = ingest_recording(rec, opts);
    REQUIRE(views.audio.has_value());
    CHECK(views.length == 17);
    CHECK(views.face->size() == 17);
    CHECK(views.audio->size() == 17);
}
