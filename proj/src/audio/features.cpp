#include "shl/audio/features.hpp"

#include "shl/core/error.hpp"

namespace shl {

void AudioFeatureSeries::truncate(std::size_t n) {
    if (n < size()) values.conservativeResize(static_cast<Eigen::Index>(n), Eigen::NoChange);
    if (n < timestamps.size()) timestamps.resize(n);
}

namespace audio {

Eigen::MatrixXd band_matrix(const AudioWindowSeries& windows, const BandSpec& band) {
    if (windows.empty()) throw InputError("no audio windows to analyse");
    const double rate = windows.sample_rate();
    const BinRange bins = band_bins(windows.window_samples(), rate, band);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(windows.size()), static_cast<Eigen::Index>(bins.count()));
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const Spectrum s = stft_magnitudes(windows.window(i), rate);
        for (std::size_t b = 0; b < bins.count(); ++b)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = s.magnitudes[bins.first + b];
    }
    return out;
}

FeatureResult extract_features(const AudioWindowSeries& windows, const FeatureOptions& options) {
    if (windows.empty()) throw InputError("no audio windows to analyse");
    FeatureResult r;
    r.bins = band_bins(windows.window_samples(), windows.sample_rate(), options.band);
    const Eigen::MatrixXd spectra = band_matrix(windows, options.band);
    r.pca = fit_pca(spectra, options.pca_k);
    r.features.values = project_rows(r.pca, spectra);
    r.features.timestamps = windows.timestamps();
    return r;
}

}  // namespace audio
}  // namespace shl
