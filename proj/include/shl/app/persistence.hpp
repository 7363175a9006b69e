#pragma once

#include <filesystem>

#include "shl/audio/features.hpp"
#include "shl/fusion/forecaster.hpp"
#include "shl/vision/novelty.hpp"

namespace shl::app {

// Every series file has a timestamp_s column followed by value columns.
void write_novelty_csv(const std::filesystem::path& path, const NoveltySeries& series);
void write_audio_features_csv(const std::filesystem::path& path, const AudioFeatureSeries& series);
void write_fused_csv(const std::filesystem::path& path, const fusion::FusedSeries& series);
void write_prediction_errors_csv(const std::filesystem::path& path, const fusion::PredictionErrorSeries& series);

NoveltySeries read_novelty_csv(const std::filesystem::path& path, ViewId view);
AudioFeatureSeries read_audio_features_csv(const std::filesystem::path& path);
fusion::PredictionErrorSeries read_prediction_errors_csv(const std::filesystem::path& path);

// File names inside a run directory.
std::string novelty_file(ViewId view);  // face_error.csv, game_error.csv
inline constexpr const char* kAudioFeaturesFile = "audio_features.csv";
inline constexpr const char* kFusedFile = "fused.csv";
inline constexpr const char* kPredictionErrorFile = "prediction_error.csv";
inline constexpr const char* kClipManifestFile = "clips.jsonl";
inline constexpr const char* kRunManifestFile = "manifest.json";
inline constexpr const char* kConfigSnapshotFile = "config.txt";
inline constexpr const char* kForecasterFile = "forecaster.shla";
std::string weights_file(ViewId view);  // face_autoencoder.shla, ...

}  // namespace shl::app
