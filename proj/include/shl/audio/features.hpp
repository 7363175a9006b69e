#pragma once

#include <vector>

#include <Eigen/Dense>

#include "shl/audio/pca.hpp"
#include "shl/audio/spectrum.hpp"
#include "shl/ingest/types.hpp"

namespace shl {

struct AudioFeatureSeries {
    Eigen::MatrixXd values;  // T x k
    std::vector<double> timestamps;

    std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
    Eigen::Index k() const noexcept { return values.cols(); }
    void truncate(std::size_t n);
};

namespace audio {

struct FeatureOptions {
    BandSpec band;
    int pca_k = 1;
};

struct FeatureResult {
    AudioFeatureSeries features;
    PcaModel pca;
    BinRange bins;
};

// Band-limited STFT magnitudes, one row per window.
Eigen::MatrixXd band_matrix(const AudioWindowSeries& windows, const BandSpec& band);

// STFT -> speech band -> per-recording PCA projection.
FeatureResult extract_features(const AudioWindowSeries& windows, const FeatureOptions& options);

}  // namespace audio
}  // namespace shl
