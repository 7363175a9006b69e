#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "shl/fusion/fused_series.hpp"

namespace shl::fusion {

struct ForecasterSpec {
    int lstm_layers = 2;
    int hidden_units = 0;  // 0 selects the input width D
};

struct ForecasterTrainOptions {
    int epochs = 100;
    int bptt_window = 100;
    std::uint64_t seed = 0;
    double rho = 0.95;
    double epsilon = 1e-6;
    double learning_rate = 1.0;
};

struct PredictionErrorSeries {
    std::vector<double> values;      // E_t, length T - 1
    std::vector<double> timestamps;  // time of the predicted frame

    std::size_t size() const noexcept { return values.size(); }
};

// Stacked LSTM layers followed by a dense sigmoid layer of width D, trained
// to predict y(t+1) from y(0..t).
class Forecaster {
public:
    Forecaster(const ForecasterSpec& spec, int input_width, std::uint64_t seed);

    int input_width() const noexcept { return input_width_; }
    int hidden_units() const noexcept { return hidden_; }
    int lstm_layers() const noexcept { return layers_; }
    const std::vector<double>& training_log() const noexcept { return training_log_; }

    Eigen::VectorXd& parameters() noexcept { return params_; }
    const Eigen::VectorXd& parameters() const noexcept { return params_; }

    // Row t of the result is the prediction for row t + 1 of the series,
    // recurrent state carried from the first row.
    Eigen::MatrixXd predict_next(const Eigen::MatrixXd& series) const;

    // Mean next-step loss over rows [begin, end) of the series, with analytic
    // gradient. The recurrent state is reset at `begin`. Exposed for
    // gradient checking.
    double loss_and_gradient(const Eigen::MatrixXd& series, Eigen::Index begin, Eigen::Index end,
                             Eigen::VectorXd& grad) const;

    void save(const std::filesystem::path& path) const;
    static Forecaster load(const std::filesystem::path& path);

private:
    friend Forecaster train_forecaster(const FusedSeries&, const ForecasterSpec&,
                                       const ForecasterTrainOptions&);

    struct State {
        std::vector<Eigen::VectorXd> h;
        std::vector<Eigen::VectorXd> c;
    };

    Eigen::Index layer_in(int layer) const noexcept { return layer == 0 ? input_width_ : hidden_; }
    Eigen::Index weight_offset(int layer) const noexcept;
    Eigen::Index bias_offset(int layer) const noexcept;
    Eigen::Index dense_weight_offset() const noexcept;
    Eigen::Index dense_bias_offset() const noexcept;

    State zero_state() const;
    // Runs one step, returns the prediction; state updated in place.
    Eigen::VectorXd step(const Eigen::VectorXd& x, State& state) const;
    // Truncated BPTT over a chunk starting from `state`; adds into grad and
    // advances state. Returns summed loss.
    double chunk_gradient(const Eigen::MatrixXd& series, Eigen::Index begin, Eigen::Index end,
                          State& state, Eigen::VectorXd& grad, double scale) const;

    int layers_;
    int hidden_;
    int input_width_;
    Eigen::VectorXd params_;
    std::vector<double> training_log_;
};

// Deterministic for a given seed. Throws InputError for T < 2 and
// TrainingDivergence when the loss turns non-finite.
Forecaster train_forecaster(const FusedSeries& series, const ForecasterSpec& spec,
                            const ForecasterTrainOptions& options);

// E_t = ||y_hat(t+1) - y(t+1)||^2 / D for t in [0, T-1).
PredictionErrorSeries prediction_errors(const Forecaster& forecaster, const FusedSeries& series);

// Same metric from explicit predictions (row t predicts actual row t + 1).
std::vector<double> step_errors(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& actual_next);

}  // namespace shl::fusion
