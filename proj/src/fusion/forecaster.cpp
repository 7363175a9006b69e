#include "shl/fusion/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "shl/core/archive.hpp"
#include "shl/core/error.hpp"

namespace shl::fusion {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstMap = Eigen::Map<const MatrixXd>;
using Map = Eigen::Map<MatrixXd>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

VectorXd sigmoid(const VectorXd& v) { return v.unaryExpr([](double x) { return sigmoid(x); }); }

struct StepCache {
    VectorXd xh;  // [x; h_prev]
    VectorXd c_prev;
    VectorXd i, f, g, o;
    VectorXd tanh_c;
};

}  // namespace

Forecaster::Forecaster(const ForecasterSpec& spec, int input_width, std::uint64_t seed)
    : layers_(spec.lstm_layers),
      hidden_(spec.hidden_units > 0 ? spec.hidden_units : input_width),
      input_width_(input_width) {
    if (input_width < 1) throw ConfigError("forecaster input width must be positive");
    if (layers_ < 1) throw ConfigError("forecaster needs at least one LSTM layer");
    if (spec.hidden_units < 0) throw ConfigError("hidden units must be non-negative");

    params_ = VectorXd::Zero(dense_bias_offset() + input_width_);
    std::mt19937_64 rng(seed);
    for (int l = 0; l < layers_; ++l) {
        const Index rows = 4 * hidden_;
        const Index cols = layer_in(l) + hidden_;
        const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (Index k = 0; k < rows * cols; ++k) params_[weight_offset(l) + k] = dist(rng);
        // forget gate bias starts at one
        params_.segment(bias_offset(l) + hidden_, hidden_).setOnes();
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(input_width_ + hidden_));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index k = 0; k < Index{input_width_} * hidden_; ++k) params_[dense_weight_offset() + k] = dist(rng);
}

Index Forecaster::weight_offset(int layer) const noexcept {
    Index off = 0;
    for (int l = 0; l < layer; ++l) off += 4 * hidden_ * (layer_in(l) + hidden_) + 4 * hidden_;
    return off;
}

Index Forecaster::bias_offset(int layer) const noexcept {
    return weight_offset(layer) + 4 * hidden_ * (layer_in(layer) + hidden_);
}

Index Forecaster::dense_weight_offset() const noexcept { return weight_offset(layers_); }

Index Forecaster::dense_bias_offset() const noexcept {
    return dense_weight_offset() + Index{input_width_} * hidden_;
}

Forecaster::State Forecaster::zero_state() const {
    State s;
    s.h.assign(static_cast<std::size_t>(layers_), VectorXd::Zero(hidden_));
    s.c.assign(static_cast<std::size_t>(layers_), VectorXd::Zero(hidden_));
    return s;
}

VectorXd Forecaster::step(const VectorXd& x, State& state) const {
    VectorXd in = x;
    for (int l = 0; l < layers_; ++l) {
        const auto li = static_cast<std::size_t>(l);
        const Index cols = layer_in(l) + hidden_;
        ConstMap w(params_.data() + weight_offset(l), 4 * hidden_, cols);
        VectorXd xh(cols);
        xh << in, state.h[li];
        const VectorXd z = w * xh + params_.segment(bias_offset(l), 4 * hidden_);
        const VectorXd i = sigmoid(VectorXd(z.segment(0, hidden_)));
        const VectorXd f = sigmoid(VectorXd(z.segment(hidden_, hidden_)));
        const VectorXd g = z.segment(2 * hidden_, hidden_).array().tanh();
        const VectorXd o = sigmoid(VectorXd(z.segment(3 * hidden_, hidden_)));
        state.c[li] = f.cwiseProduct(state.c[li]) + i.cwiseProduct(g);
        state.h[li] = o.cwiseProduct(VectorXd(state.c[li].array().tanh()));
        in = state.h[li];
    }
    ConstMap wd(params_.data() + dense_weight_offset(), input_width_, hidden_);
    return sigmoid(VectorXd(wd * in + params_.segment(dense_bias_offset(), input_width_)));
}

MatrixXd Forecaster::predict_next(const MatrixXd& series) const {
    if (series.cols() != input_width_) throw InputError("series width does not match forecaster");
    const Index t = series.rows();
    MatrixXd out(t > 0 ? t - 1 : 0, input_width_);
    State state = zero_state();
    for (Index r = 0; r + 1 < t; ++r) out.row(r) = step(series.row(r).transpose(), state).transpose();
    return out;
}

double Forecaster::chunk_gradient(const MatrixXd& series, Index begin, Index end, State& state,
                                  VectorXd& grad, double scale) const {
    const Index n = end - begin;
    const auto L = static_cast<std::size_t>(layers_);
    const double d = static_cast<double>(input_width_);
    std::vector<std::vector<StepCache>> cache(static_cast<std::size_t>(n), std::vector<StepCache>(L));
    std::vector<VectorXd> top_h(static_cast<std::size_t>(n));
    std::vector<VectorXd> y_hat(static_cast<std::size_t>(n));

    ConstMap wd(params_.data() + dense_weight_offset(), input_width_, hidden_);
    double loss = 0.0;
    for (Index s = 0; s < n; ++s) {
        const auto si = static_cast<std::size_t>(s);
        VectorXd in = series.row(begin + s).transpose();
        for (std::size_t l = 0; l < L; ++l) {
            StepCache& k = cache[si][l];
            const int li = static_cast<int>(l);
            const Index cols = layer_in(li) + hidden_;
            ConstMap w(params_.data() + weight_offset(li), 4 * hidden_, cols);
            k.xh.resize(cols);
            k.xh << in, state.h[l];
            k.c_prev = state.c[l];
            const VectorXd z = w * k.xh + params_.segment(bias_offset(li), 4 * hidden_);
            k.i = sigmoid(VectorXd(z.segment(0, hidden_)));
            k.f = sigmoid(VectorXd(z.segment(hidden_, hidden_)));
            k.g = z.segment(2 * hidden_, hidden_).array().tanh();
            k.o = sigmoid(VectorXd(z.segment(3 * hidden_, hidden_)));
            state.c[l] = k.f.cwiseProduct(k.c_prev) + k.i.cwiseProduct(k.g);
            k.tanh_c = state.c[l].array().tanh();
            state.h[l] = k.o.cwiseProduct(k.tanh_c);
            in = state.h[l];
        }
        top_h[si] = in;
        y_hat[si] = sigmoid(VectorXd(wd * in + params_.segment(dense_bias_offset(), input_width_)));
        loss += (y_hat[si] - series.row(begin + s + 1).transpose()).squaredNorm() / d;
    }

    Map gwd(grad.data() + dense_weight_offset(), input_width_, hidden_);
    std::vector<VectorXd> dh_next(L, VectorXd::Zero(hidden_));
    std::vector<VectorXd> dc_next(L, VectorXd::Zero(hidden_));
    for (Index s = n - 1; s >= 0; --s) {
        const auto si = static_cast<std::size_t>(s);
        const VectorXd& y = y_hat[si];
        const VectorXd dy = (2.0 * scale / d) * (y - series.row(begin + s + 1).transpose()).cwiseProduct(
                                                     VectorXd(y.array() * (1.0 - y.array())));
        gwd.noalias() += dy * top_h[si].transpose();
        grad.segment(dense_bias_offset(), input_width_) += dy;
        VectorXd dh_above = wd.transpose() * dy;

        for (std::size_t lr = L; lr-- > 0;) {
            const StepCache& k = cache[si][lr];
            const int li = static_cast<int>(lr);
            const Index cols = layer_in(li) + hidden_;
            ConstMap w(params_.data() + weight_offset(li), 4 * hidden_, cols);
            Map gw(grad.data() + weight_offset(li), 4 * hidden_, cols);

            const VectorXd dh = dh_above + dh_next[lr];
            const VectorXd d_o = dh.cwiseProduct(k.tanh_c);
            const VectorXd dc = dh.cwiseProduct(k.o).cwiseProduct(VectorXd(1.0 - k.tanh_c.array().square())) +
                                dc_next[lr];
            VectorXd dz(4 * hidden_);
            dz.segment(0, hidden_) = dc.cwiseProduct(k.g).cwiseProduct(VectorXd(k.i.array() * (1.0 - k.i.array())));
            dz.segment(hidden_, hidden_) =
                dc.cwiseProduct(k.c_prev).cwiseProduct(VectorXd(k.f.array() * (1.0 - k.f.array())));
            dz.segment(2 * hidden_, hidden_) =
                dc.cwiseProduct(k.i).cwiseProduct(VectorXd(1.0 - k.g.array().square()));
            dz.segment(3 * hidden_, hidden_) = d_o.cwiseProduct(VectorXd(k.o.array() * (1.0 - k.o.array())));
            dc_next[lr] = dc.cwiseProduct(k.f);

            gw.noalias() += dz * k.xh.transpose();
            grad.segment(bias_offset(li), 4 * hidden_) += dz;
            const VectorXd dxh = w.transpose() * dz;
            dh_above = dxh.head(layer_in(li));
            dh_next[lr] = dxh.tail(hidden_);
        }
    }
    return loss;
}

double Forecaster::loss_and_gradient(const MatrixXd& series, Index begin, Index end, VectorXd& grad) const {
    if (series.cols() != input_width_) throw InputError("series width does not match forecaster");
    if (begin < 0 || end <= begin || end >= series.rows()) throw InputError("invalid forecaster range");
    grad = VectorXd::Zero(params_.size());
    State state = zero_state();
    const double n = static_cast<double>(end - begin);
    return chunk_gradient(series, begin, end, state, grad, 1.0 / n) / n;
}

void Forecaster::save(const std::filesystem::path& path) const {
    NamedArrayArchive ar;
    ar.metadata["kind"] = "forecaster";
    ar.metadata["lstm_layers"] = std::to_string(layers_);
    ar.metadata["hidden_units"] = std::to_string(hidden_);
    ar.metadata["input_width"] = std::to_string(input_width_);
    ar.put("parameters", {static_cast<int>(params_.size())},
           std::span<const double>(params_.data(), static_cast<std::size_t>(params_.size())));
    ar.put("training_log", {static_cast<int>(training_log_.size())}, std::span<const double>(training_log_));
    ar.save(path);
}

Forecaster Forecaster::load(const std::filesystem::path& path) {
    const NamedArrayArchive ar = NamedArrayArchive::load(path);
    if (!ar.metadata.contains("kind") || ar.meta("kind") != "forecaster")
        throw ParseError(path.string() + ": not a forecaster checkpoint");
    ForecasterSpec spec;
    int width = 0;
    try {
        spec.lstm_layers = std::stoi(ar.meta("lstm_layers"));
        spec.hidden_units = std::stoi(ar.meta("hidden_units"));
        width = std::stoi(ar.meta("input_width"));
    } catch (const std::logic_error&) {
        throw ParseError(path.string() + ": bad forecaster metadata");
    }
    Forecaster f(spec, width, 0);
    const auto p = ar.doubles("parameters", {static_cast<int>(f.params_.size())});
    std::copy(p.begin(), p.end(), f.params_.data());
    const auto& log = ar.get("training_log");
    const auto l = ar.doubles("training_log", log.dims);
    f.training_log_.assign(l.begin(), l.end());
    return f;
}

Forecaster train_forecaster(const FusedSeries& series, const ForecasterSpec& spec,
                            const ForecasterTrainOptions& options) {
    const Index t = series.rows();
    if (t < 2) throw InputError("forecaster needs at least two time steps");
    if (!series.values.allFinite()) throw InputError("fused series contains non-finite values");
    if (options.epochs < 1) throw ConfigError("forecaster epochs must be positive");
    if (options.bptt_window < 1) throw ConfigError("bptt window must be positive");

    Forecaster model(spec, static_cast<int>(series.cols()), options.seed);
    const Index p = model.params_.size();
    VectorXd grad(p);
    VectorXd mean_sq_grad = VectorXd::Zero(p);
    VectorXd mean_sq_delta = VectorXd::Zero(p);
    const double rho = options.rho;
    const double eps = options.epsilon;

    const Index pairs = t - 1;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        Forecaster::State state = model.zero_state();
        double total = 0.0;
        for (Index begin = 0; begin < pairs; begin += options.bptt_window) {
            const Index end = std::min(pairs, begin + options.bptt_window);
            grad.setZero();
            const double n = static_cast<double>(end - begin);
            total += model.chunk_gradient(series.values, begin, end, state, grad, 1.0 / n);
            for (Index k = 0; k < p; ++k) {
                const double g = grad[k];
                mean_sq_grad[k] = rho * mean_sq_grad[k] + (1.0 - rho) * g * g;
                const double delta = -std::sqrt(mean_sq_delta[k] + eps) / std::sqrt(mean_sq_grad[k] + eps) * g;
                mean_sq_delta[k] = rho * mean_sq_delta[k] + (1.0 - rho) * delta * delta;
                model.params_[k] += options.learning_rate * delta;
            }
        }
        const double loss = total / static_cast<double>(pairs);
        if (!std::isfinite(loss) || !model.params_.allFinite())
            throw TrainingDivergence("forecaster loss became non-finite", epoch);
        model.training_log_.push_back(loss);
    }
    return model;
}

std::vector<double> step_errors(const MatrixXd& predictions, const MatrixXd& actual_next) {
    if (predictions.rows() != actual_next.rows() || predictions.cols() != actual_next.cols())
        throw InputError("prediction and target shapes differ");
    if (predictions.cols() == 0) throw InputError("zero-width series");
    std::vector<double> out(static_cast<std::size_t>(predictions.rows()));
    const double d = static_cast<double>(predictions.cols());
    for (Index r = 0; r < predictions.rows(); ++r)
        out[static_cast<std::size_t>(r)] = (predictions.row(r) - actual_next.row(r)).squaredNorm() / d;
    return out;
}

PredictionErrorSeries prediction_errors(const Forecaster& forecaster, const FusedSeries& series) {
    const Index t = series.rows();
    if (t < 2) throw InputError("need at least two time steps to score predictions");
    const MatrixXd pred = forecaster.predict_next(series.values);
    PredictionErrorSeries out;
    out.values = step_errors(pred, series.values.bottomRows(t - 1));
    out.timestamps.resize(out.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.timestamps[i] = i + 1 < series.timestamps.size() ? series.timestamps[i + 1] : static_cast<double>(i + 1) / 10.0;
    return out;
}

}  // namespace shl::fusion
