#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "shl/core/error.hpp"
#include "shl/fusion/forecaster.hpp"
#include "shl/fusion/fused_series.hpp"

using namespace shl;
using namespace shl::fusion;

namespace {

NoveltySeries novelty(ViewId view, std::vector<double> values) {
    NoveltySeries s;
    s.view = view;
    for (std::size_t i = 0; i < values.size(); ++i) s.timestamps.push_back(static_cast<double>(i) / 10.0);
    s.values = std::move(values);
    return s;
}

FusedSeries fused(const Eigen::MatrixXd& values) {
    FusedSeries f;
    f.values = values;
    for (Eigen::Index j = 0; j < values.cols(); ++j) f.dims.push_back("c" + std::to_string(j));
    for (Eigen::Index i = 0; i < values.rows(); ++i) f.timestamps.push_back(static_cast<double>(i) / 10.0);
    return f;
}

Eigen::MatrixXd random_series(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

}  // namespace

TEST_CASE("normalize_series examples") {
    CHECK(normalize_series(std::vector<double>{2, 4, 6}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(normalize_series(std::vector<double>{5, 5, 5}) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(normalize_series(std::vector<double>{0.2, 0.8}) == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(normalize_series(std::vector<double>{1.0, NAN}), InputError);
    CHECK_THROWS_AS(normalize_series(std::vector<double>{}), InputError);
    const auto once = normalize_series(std::vector<double>{3, 1, 4, 1, 5, 9, 2, 6});
    CHECK(normalize_series(once) == once);
}

TEST_CASE("assemble fixes column order and restricts to present views") {
    const auto face = novelty(ViewId::face, {1, 2, 3, 4, 5});
    const auto game = novelty(ViewId::game, {5, 4, 3, 2, 1, 0});
    AudioFeatureSeries audio;
    audio.values = Eigen::MatrixXd(5, 2);
    audio.values << 1, 0, 2, 1, 3, 0, 4, 1, 5, 0;
    audio.timestamps = {0, 0.1, 0.2, 0.3, 0.4};

    AudioFeatureSeries audio1;
    audio1.values = audio.values.leftCols(1);
    audio1.timestamps = audio.timestamps;
    const auto all = assemble(&face, &game, &audio1);
    CHECK(all.cols() == 3);
    CHECK(all.rows() == 5);
    CHECK(all.dims == std::vector<std::string>{"face_error", "game_error", "audio_pc1"});
    // game truncated to the common length before normalizing: 5..1 -> 1..0
    CHECK(all.values(0, 1) == 1.0);
    CHECK(all.values(4, 1) == 0.0);

    const auto f = assemble(&face, nullptr, nullptr);
    CHECK(f.dims == std::vector<std::string>{"face_error"});
    const auto fa = assemble(&face, nullptr, &audio);
    CHECK(fa.dims == std::vector<std::string>{"face_error", "audio_pc1", "audio_pc2"});
    for (Eigen::Index j = 0; j < fa.cols(); ++j) {
        CHECK(fa.values.col(j).minCoeff() == 0.0);
        CHECK(fa.values.col(j).maxCoeff() == 1.0);
    }
    CHECK(fa.timestamps == face.timestamps);
    CHECK_THROWS_AS(assemble(nullptr, nullptr, nullptr), PipelineError);
}

TEST_CASE("LSTM gradients agree with finite differences") {
    for (int layers : {1, 2}) {
        Forecaster model({layers, 4}, 3, 17);
        const auto series = random_series(12, 3, 5);
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(model.parameters().size());
        model.loss_and_gradient(series, 0, 11, grad);
        Eigen::VectorXd scratch;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < model.parameters().size(); ++i) {
            const double keep = model.parameters()[i];
            const double h = 1e-6;
            model.parameters()[i] = keep + h;
            scratch.setZero(model.parameters().size());
            const double up = model.loss_and_gradient(series, 0, 11, scratch);
            model.parameters()[i] = keep - h;
            scratch.setZero(model.parameters().size());
            const double down = model.loss_and_gradient(series, 0, 11, scratch);
            model.parameters()[i] = keep;
            const double numeric = (up - down) / (2 * h);
            worst = std::max(worst, std::abs(numeric - grad[i]) / (1e-4 + std::abs(numeric)));
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("constant 0.5 series is learned") {
    const auto f = fused(Eigen::MatrixXd::Constant(60, 3, 0.5));
    ForecasterTrainOptions opts;
    opts.epochs = 200;
    opts.bptt_window = 20;
    opts.seed = 1;
    const auto model = train_forecaster(f, {}, opts);
    CHECK(model.hidden_units() == 3);
    CHECK(model.lstm_layers() == 2);
    REQUIRE(model.training_log().size() == 200u);
    CHECK(model.training_log().back() < 1e-4);
}

TEST_CASE("a 2-cycle is memorized") {
    Eigen::MatrixXd v(80, 3);
    for (int i = 0; i < 80; ++i) {
        if (i % 2) v.row(i) << 0.9, 0.1, 0.8;
        else v.row(i) << 0.1, 0.9, 0.2;
    }
    ForecasterTrainOptions opts;
    opts.epochs = 400;
    opts.bptt_window = 20;
    opts.seed = 2;
    const auto model = train_forecaster(fused(v), {2, 6}, opts);
    CHECK(model.training_log().back() < 1e-3);
}

TEST_CASE("training and prediction are deterministic") {
    const auto f = fused(random_series(50, 3, 9));
    ForecasterTrainOptions opts;
    opts.epochs = 5;
    opts.bptt_window = 16;
    opts.seed = 4;
    const auto a = prediction_errors(train_forecaster(f, {}, opts), f);
    const auto b = prediction_errors(train_forecaster(f, {}, opts), f);
    CHECK(a.values == b.values);
    opts.seed = 5;
    const auto c = prediction_errors(train_forecaster(f, {}, opts), f);
    CHECK(a.values != c.values);
    REQUIRE(a.size() == 49u);
    CHECK(a.timestamps.front() == doctest::Approx(0.1));
    for (double e : a.values) CHECK((std::isfinite(e) && e >= 0.0));
}

TEST_CASE("step error arithmetic") {
    Eigen::MatrixXd pred(1, 3), actual(1, 3);
    pred << 1, 0, 0;
    actual << 0, 0, 0;
    CHECK(step_errors(pred, actual) == std::vector<double>{1.0 / 3.0});
    const auto r = random_series(7, 3, 1);
    for (double e : step_errors(r, r)) CHECK(e == 0.0);
    CHECK_THROWS_AS(step_errors(pred, Eigen::MatrixXd::Zero(1, 2)), InputError);
}

TEST_CASE("planted spike in two of three columns is found") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(120, 3, 0.3);
    const int spike = 70;
    v(spike, 0) = 1.0;
    v(spike, 2) = 1.0;
    ForecasterTrainOptions opts;
    opts.epochs = 60;
    opts.bptt_window = 40;
    opts.seed = 3;
    const auto f = fused(v);
    const auto e = prediction_errors(train_forecaster(f, {}, opts), f);
    const auto argmax = std::ranges::max_element(e.values) - e.values.begin();
    const long predicted_row = argmax + 1;
    CHECK(std::abs(predicted_row - spike) <= 1);
}

TEST_CASE("spikes in all views give larger errors than a single-view spike") {
    const int t = 100, spike = 80;
    ForecasterTrainOptions opts;
    opts.epochs = 60;
    opts.bptt_window = 40;
    opts.seed = 8;
    const auto model = train_forecaster(fused(Eigen::MatrixXd::Constant(spike, 3, 0.2)), {}, opts);
    Eigen::MatrixXd one = Eigen::MatrixXd::Constant(t, 3, 0.2);
    Eigen::MatrixXd all = one;
    one(spike, 1) = 0.9;
    all.row(spike).setConstant(0.9);
    const auto e1 = prediction_errors(model, fused(one));
    const auto e3 = prediction_errors(model, fused(all));
    CHECK(e3.values[spike - 1] > e1.values[spike - 1]);
    CHECK(e1.values[spike - 2] == e3.values[spike - 2]);
}

TEST_CASE("forecaster errors") {
    ForecasterTrainOptions opts;
    CHECK_THROWS_AS(train_forecaster(fused(Eigen::MatrixXd::Zero(1, 3)), {}, opts), InputError);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 3);
    bad(2, 1) = NAN;
    CHECK_THROWS_AS(train_forecaster(fused(bad), {}, opts), InputError);
    opts.epochs = 0;
    CHECK_THROWS_AS(train_forecaster(fused(Eigen::MatrixXd::Zero(4, 3)), {}, opts), ConfigError);
    const Forecaster model({}, 3, 0);
    CHECK_THROWS_AS(prediction_errors(model, fused(Eigen::MatrixXd::Zero(5, 2))), InputError);
    CHECK_THROWS_AS(prediction_errors(model, fused(Eigen::MatrixXd::Zero(1, 3))), InputError);
}

TEST_CASE("forecaster save and load") {
    const auto dir = std::filesystem::temp_directory_path() / "shl_test_fusion";
    std::filesystem::create_directories(dir);
    const auto f = fused(random_series(30, 2, 4));
    ForecasterTrainOptions opts;
    opts.epochs = 3;
    const auto model = train_forecaster(f, {2, 5}, opts);
    model.save(dir / "f.shla");
    const auto back = Forecaster::load(dir / "f.shla");
    CHECK(back.hidden_units() == 5);
    CHECK(back.input_width() == 2);
    CHECK(back.training_log() == model.training_log());
    CHECK(prediction_errors(back, f).values == prediction_errors(model, f).values);
}
