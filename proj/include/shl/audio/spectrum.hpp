#pragma once

#include <span>
#include <vector>

namespace shl::audio {

struct Spectrum {
    std::vector<double> magnitudes;  // |X_k| for k = 0 .. N/2
    std::vector<double> bin_freqs;   // k * sample_rate / N
    std::size_t window_length = 0;   // N
    double sample_rate = 0.0;
};

struct BandSpec {
    double low = 300.0;
    double high = 3400.0;
};

// Hann taper of length n (periodic form, so the STFT frames overlap-add).
std::vector<double> hann_window(std::size_t n);

// Magnitudes of the DFT of the Hann-tapered window.
Spectrum stft_magnitudes(std::span<const float> window, double sample_rate);

// Bins with low <= f <= high, in ascending order. Throws ConfigError when
// the band is not inside (0, Nyquist].
std::vector<double> band_filter(const Spectrum& spectrum, const BandSpec& band);

// Index range [first, last] of the retained bins, for callers that reuse it
// across windows of one recording.
struct BinRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count() const noexcept { return last - first + 1; }
};
BinRange band_bins(std::size_t window_length, double sample_rate, const BandSpec& band);

}  // namespace shl::audio
