#include "shl/audio/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "shl/core/error.hpp"

namespace shl::audio {
namespace {

// FFTW planning is not thread-safe; plans are created once per length under a
// lock and executed with the new-array interface afterwards.
class PlanCache {
public:
    struct Plan {
        fftw_plan plan = nullptr;
        ~Plan() {
            if (plan) fftw_destroy_plan(plan);
        }
    };

    const Plan& get(std::size_t n) {
        std::lock_guard lock(mutex_);
        auto& slot = plans_[n];
        if (!slot) {
            slot = std::make_unique<Plan>();
            auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
            auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
            slot->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
            fftw_free(in);
            fftw_free(out);
            if (!slot->plan) throw InputError("FFTW could not plan a transform of length " + std::to_string(n));
        }
        return *slot;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, std::unique_ptr<Plan>> plans_;
};

PlanCache& plans() {
    static PlanCache cache;
    return cache;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

Spectrum stft_magnitudes(std::span<const float> window, double sample_rate) {
    if (window.empty()) throw InputError("stft of an empty window");
    if (!(sample_rate > 0.0)) throw InputError("sample rate must be positive");
    const std::size_t n = window.size();
    const auto& plan = plans().get(n);

    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
    const auto taper = hann_window(n);
    for (std::size_t i = 0; i < n; ++i) in.get()[i] = taper[i] * static_cast<double>(window[i]);
    fftw_execute_dft_r2c(plan.plan, in.get(), out.get());

    Spectrum s;
    s.window_length = n;
    s.sample_rate = sample_rate;
    s.magnitudes.resize(n / 2 + 1);
    s.bin_freqs.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        s.magnitudes[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
        s.bin_freqs[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    }
    return s;
}

BinRange band_bins(std::size_t window_length, double sample_rate, const BandSpec& band) {
    const double nyquist = sample_rate / 2.0;
    if (!(band.low > 0.0) || !(band.low < band.high) || band.high > nyquist)
        throw ConfigError("band [" + std::to_string(band.low) + ", " + std::to_string(band.high) +
                          "] Hz must satisfy 0 < low < high <= Nyquist (" + std::to_string(nyquist) + " Hz)");
    const double width = sample_rate / static_cast<double>(window_length);
    // Small relative slack so edges that land exactly on a bin are kept.
    const double slack = 1e-9 * width;
    BinRange r;
    r.first = static_cast<std::size_t>(std::ceil((band.low - slack) / width));
    r.last = static_cast<std::size_t>(std::floor((band.high + slack) / width));
    r.last = std::min(r.last, window_length / 2);
    if (r.last < r.first) throw ConfigError("band retains no frequency bins at this resolution");
    return r;
}

std::vector<double> band_filter(const Spectrum& spectrum, const BandSpec& band) {
    if (spectrum.magnitudes.empty() || spectrum.window_length == 0)
        throw InputError("cannot band-filter an empty spectrum");
    const BinRange r = band_bins(spectrum.window_length, spectrum.sample_rate, band);
    return {spectrum.magnitudes.begin() + static_cast<std::ptrdiff_t>(r.first),
            spectrum.magnitudes.begin() + static_cast<std::ptrdiff_t>(r.last) + 1};
}

}  // namespace shl::audio
