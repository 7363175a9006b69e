#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shl/audio/features.hpp"
#include "shl/vision/novelty.hpp"

namespace shl::fusion {

// Aligned multi-view matrix fed to the forecaster; every column lies in [0, 1].
struct FusedSeries {
    std::vector<std::string> dims;  // column labels, e.g. face_error, game_error, audio_pc1
    Eigen::MatrixXd values;         // T x D
    std::vector<double> timestamps;

    Eigen::Index rows() const noexcept { return values.rows(); }
    Eigen::Index cols() const noexcept { return values.cols(); }
};

// (x - min) / (max - min); a constant series maps to zeros.
std::vector<double> normalize_series(std::span<const double> values);

// Column order is (face, game, audio_pc1..pck) restricted to the views that
// are present. Views are truncated to their common length first. Throws
// PipelineError when every view is absent.
FusedSeries assemble(const NoveltySeries* face, const NoveltySeries* game,
                     const AudioFeatureSeries* audio);

}  // namespace shl::fusion
