#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shl/audio/features.hpp"
#include "shl/audio/pca.hpp"
#include "shl/audio/spectrum.hpp"
#include "shl/core/error.hpp"
#include "shl/ingest/ingest.hpp"

using namespace shl;
using namespace shl::audio;

namespace {

std::vector<float> sine(double hz, std::size_t n, double rate, double amp = 1.0) {
    std::vector<float> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate));
    return x;
}

double energy(const std::vector<double>& v) {
    double s = 0.0;
    for (double m : v) s += m * m;
    return s;
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = nd(rng) * (1.0 + j);
    return m;
}

}  // namespace

TEST_CASE("zero window has zero magnitudes") {
    const std::vector<float> zeros(6400, 0.0f);
    const auto s = stft_magnitudes(zeros, 16000);
    CHECK(s.magnitudes.size() == 3201u);
    for (double m : s.magnitudes) REQUIRE(m == 0.0);
    CHECK(s.bin_freqs[1] == doctest::Approx(2.5));
    CHECK(s.bin_freqs.back() == doctest::Approx(8000.0));
    CHECK_THROWS_AS(stft_magnitudes(std::vector<float>{}, 16000), InputError);
}

TEST_CASE("1 kHz tone peaks at the 1 kHz bin") {
    const auto x = sine(1000.0, 6400, 16000.0);
    const auto s = stft_magnitudes(x, 16000);
    const auto peak = std::ranges::max_element(s.magnitudes) - s.magnitudes.begin();
    CHECK(peak == 400);
    CHECK(s.bin_freqs[static_cast<std::size_t>(peak)] == doctest::Approx(1000.0));
}

TEST_CASE("FFT magnitudes equal the naive DFT") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    for (std::size_t n : {64u, 400u, 1000u}) {
        std::vector<float> x(n);
        for (float& v : x) v = u(rng);
        const auto s = stft_magnitudes(x, 8000);
        const auto ref = oracle::dft_magnitudes(x);
        REQUIRE(s.magnitudes.size() == ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) REQUIRE(s.magnitudes[k] == doctest::Approx(ref[k]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("Parseval identity on the tapered window") {
    std::mt19937_64 rng(2);
    std::normal_distribution<float> nd;
    std::vector<float> x(6400);
    for (float& v : x) v = nd(rng);
    const auto s = stft_magnitudes(x, 16000);
    const auto w = hann_window(x.size());
    double time_energy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) time_energy += (w[i] * x[i]) * (w[i] * x[i]);
    const auto& m = s.magnitudes;
    double spec = m.front() * m.front() + m.back() * m.back();
    for (std::size_t k = 1; k + 1 < m.size(); ++k) spec += 2.0 * m[k] * m[k];
    CHECK(spec / static_cast<double>(x.size()) == doctest::Approx(time_energy).epsilon(1e-6));
}

TEST_CASE("speech band keeps bins 120..1360 at 16 kHz") {
    const auto r = band_bins(6400, 16000, BandSpec{});
    CHECK(r.first == 120u);
    CHECK(r.last == 1360u);
    CHECK(r.count() == 1241u);
    const auto s = stft_magnitudes(sine(700.0, 6400, 16000.0), 16000);
    const auto kept = band_filter(s, BandSpec{});
    REQUIRE(kept.size() == 1241u);
    CHECK(kept.front() == s.magnitudes[120]);
    CHECK(kept.back() == s.magnitudes[1360]);
}

TEST_CASE("band energy retention") {
    const auto in_band = stft_magnitudes(sine(1000.0, 6400, 16000.0), 16000);
    CHECK(energy(band_filter(in_band, {})) >= 0.99 * energy(in_band.magnitudes));
    const auto out_band = stft_magnitudes(sine(5000.0, 6400, 16000.0), 16000);
    CHECK(energy(band_filter(out_band, {})) <= 0.01 * energy(out_band.magnitudes));
}

TEST_CASE("band outside Nyquist is a config error") {
    const auto s = stft_magnitudes(sine(100.0, 800, 2000.0), 2000);  // Nyquist 1000 Hz
    CHECK_THROWS_AS(band_filter(s, {}), ConfigError);
    CHECK_THROWS_AS(band_filter(s, {500.0, 400.0}), ConfigError);
    CHECK_THROWS_AS(band_filter(s, {0.0, 400.0}), ConfigError);
    CHECK_NOTHROW(band_filter(s, {300.0, 900.0}));
}

TEST_CASE("PCA on rank-one data explains everything") {
    Eigen::MatrixXd line(20, 2);
    for (int i = 0; i < 20; ++i) line.row(i) << 1.0 + 2.0 * i, -3.0 + 0.5 * i;
    const auto m = fit_pca(line, 1);
    CHECK(m.explained_variance_ratio()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.components(0, 0) > 0.0);
    CHECK(m.components.row(0).norm() == doctest::Approx(1.0));
}

TEST_CASE("full-rank PCA reconstructs exactly") {
    const auto data = random_matrix(30, 5, 3);
    const auto m = fit_pca(data, 5);
    for (int i = 0; i < 30; ++i) {
        const Eigen::VectorXd x = data.row(i).transpose();
        CHECK((reconstruct(m, project(m, x)) - x).norm() < 1e-6);
    }
    const Eigen::MatrixXd gram = m.components * m.components.transpose();
    CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-6);
    for (int j = 1; j < 5; ++j) CHECK(m.explained_variance[j] <= m.explained_variance[j - 1]);
}

TEST_CASE("PCA matches a Jacobi eigendecomposition of the covariance") {
    for (std::uint64_t seed : {4u, 5u, 6u}) {
        const auto data = random_matrix(40, 6, seed);
        const auto m = fit_pca(data, 3);
        const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
        const Eigen::MatrixXd cov = centered.transpose() * centered / (data.rows() - 1.0);
        const auto [vals, vecs] = oracle::jacobi_eigen(cov);
        for (int c = 0; c < 3; ++c) {
            CHECK(m.explained_variance[c] == doctest::Approx(vals[c]).epsilon(1e-6));
            const Eigen::VectorXd ref = vecs.col(c);
            const double sign = ref.dot(m.components.row(c).transpose()) < 0 ? -1.0 : 1.0;
            CHECK((sign * ref - m.components.row(c).transpose()).cwiseAbs().maxCoeff() < 1e-6);
            Eigen::Index big = 0;
            m.components.row(c).cwiseAbs().maxCoeff(&big);
            CHECK(m.components(c, big) > 0.0);
        }
        // variances of the projected fit data equal explained_variance
        const Eigen::MatrixXd scores = project_rows(m, data);
        for (int c = 0; c < 3; ++c) {
            const double var = scores.col(c).squaredNorm() / (data.rows() - 1.0);
            CHECK(var == doctest::Approx(m.explained_variance[c]).epsilon(1e-6));
        }
    }
}

TEST_CASE("projection") {
    const auto data = random_matrix(25, 4, 7);
    const auto m = fit_pca(data, 2);
    CHECK(project(m, m.mean).norm() < 1e-12);
    const Eigen::VectorXd along = m.mean + 2.5 * m.components.row(0).transpose();
    const auto p = project(m, along);
    CHECK(p[0] == doctest::Approx(2.5));
    CHECK(std::abs(p[1]) < 1e-9);
    const Eigen::VectorXd x = data.row(3).transpose() * 0.7;
    const auto px = project(m, x);
    for (int c = 0; c < 2; ++c) {
        double dot = 0.0;
        for (int j = 0; j < 4; ++j) dot += (x[j] - m.mean[j]) * m.components(c, j);
        CHECK(px[c] == doctest::Approx(dot).epsilon(1e-12));
    }
    CHECK_THROWS_AS(project(m, Eigen::VectorXd::Zero(3)), InputError);
    CHECK_THROWS_AS(fit_pca(data, 5), ConfigError);
    CHECK_THROWS_AS(fit_pca(data, 0), ConfigError);
}

TEST_CASE("a loud 1 kHz burst stands out on the first component") {
    const int rate = 16000;
    auto sig = std::make_shared<AudioSignal>();
    sig->sample_rate = rate;
    sig->samples.resize(static_cast<std::size_t>(rate) * 10);
    std::mt19937_64 rng(8);
    std::normal_distribution<float> nd(0.0f, 0.01f);
    for (std::size_t i = 0; i < sig->samples.size(); ++i) {
        const double t = static_cast<double>(i) / rate;
        float v = nd(rng) + static_cast<float>(0.05 * std::sin(2 * std::numbers::pi * 440.0 * t));
        if (t >= 5.0 && t < 5.4) v += static_cast<float>(0.8 * std::sin(2 * std::numbers::pi * 1000.0 * t));
        sig->samples[i] = v;
    }
    const auto windows = window_audio(sig);
    const auto res = extract_features(windows, {});
    REQUIRE(res.features.size() == windows.size());
    CHECK(res.bins.count() == 1241u);
    std::vector<double> pc1(res.features.size());
    for (std::size_t i = 0; i < pc1.size(); ++i) pc1[i] = res.features.values(static_cast<Eigen::Index>(i), 0);
    auto sorted = pc1;
    std::ranges::sort(sorted);
    const double median = sorted[sorted.size() / 2];
    std::vector<double> dev;
    for (double v : pc1) dev.push_back(std::abs(v - median));
    std::ranges::sort(dev);
    const double mad = dev[dev.size() / 2];
    const std::size_t burst = 50;  // window starting at 5.0 s covers the whole burst
    CHECK(res.features.timestamps[burst] == doctest::Approx(5.0));
    CHECK(std::abs(pc1[burst] - median) > 3.0 * mad);
}
