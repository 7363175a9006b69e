#include "shl/vision/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "shl/core/error.hpp"

namespace shl {

void NoveltySeries::truncate(std::size_t n) {
    if (n < values.size()) values.resize(n);
    if (n < timestamps.size()) timestamps.resize(n);
}

namespace vision {

TrainedAutoencoder train_autoencoder(Autoencoder model, const FrameSeries& frames,
                                     const TrainOptions& options) {
    if (frames.frames.empty()) throw InputError("cannot train an autoencoder on an empty frame series");
    if (options.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (options.batch_size < 1) throw ConfigError("batch size must be >= 1");
    const auto& spec = model.spec();
    for (const auto& f : frames.frames)
        if (f.width() != spec.width || f.height() != spec.height || f.channels() != spec.channels)
            throw InputError("frame shape does not match the autoencoder input");

    std::vector<std::vector<float>> planar;
    planar.reserve(frames.frames.size());
    for (const auto& f : frames.frames) planar.push_back(to_planar(f));

    const auto& k = simd::kernels();
    const std::size_t nparams = model.weights().size();
    const std::size_t first_trainable = options.freeze_encoder ? model.encoder_parameter_count() : 0;
    const std::size_t trainable = nparams - first_trainable;

    std::vector<float> grads(nparams);
    std::vector<float> mean_sq_grad(nparams, 0.0f);
    std::vector<float> mean_sq_delta(nparams, 0.0f);
    std::vector<std::size_t> order(planar.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(options.seed);
    Workspace ws;

    TrainedAutoencoder result{std::move(model), options.freeze_encoder, {}};
    Autoencoder& net = result.model;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(options.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(options.batch_size));
            std::fill(grads.begin(), grads.end(), 0.0f);
            for (std::size_t i = start; i < end; ++i)
                epoch_loss += net.accumulate_gradients(planar[order[i]], grads, ws, options.freeze_encoder);
            const float inv = 1.0f / static_cast<float>(end - start);
            for (std::size_t i = first_trainable; i < nparams; ++i) grads[i] *= inv;
            k.adadelta(net.weights().data() + first_trainable, grads.data() + first_trainable,
                       mean_sq_grad.data() + first_trainable, mean_sq_delta.data() + first_trainable,
                       trainable, options.optimizer);
        }
        epoch_loss /= static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss))
            throw TrainingDivergence("autoencoder loss became non-finite in epoch " + std::to_string(epoch + 1),
                                     epoch + 1);
        result.training_log.push_back(epoch_loss);
    }
    return result;
}

double frame_error(const Image& original, const Image& reconstruction) {
    if (!original.same_shape(reconstruction))
        throw InputError("frame_error: image shapes differ");
    if (original.empty()) throw InputError("frame_error: empty images");
    const auto a = original.data();
    const auto b = reconstruction.data();
    return simd::kernels().sum_squared_diff(a.data(), b.data(), a.size()) / static_cast<double>(a.size());
}

NoveltySeries reconstruction_errors(const Autoencoder& model, const FrameSeries& frames) {
    NoveltySeries out;
    out.view = frames.view;
    out.timestamps = frames.timestamps;
    out.values.reserve(frames.frames.size());
    const auto& spec = model.spec();
    const auto& k = simd::kernels();
    Workspace ws;
    std::vector<float> recon(spec.input_shape().size());
    for (const auto& f : frames.frames) {
        if (f.width() != spec.width || f.height() != spec.height || f.channels() != spec.channels)
            throw InputError("frame shape does not match the autoencoder input");
        const auto planar = to_planar(f);
        model.forward(planar, recon, ws);
        out.values.push_back(k.sum_squared_diff(planar.data(), recon.data(), planar.size()) /
                             static_cast<double>(planar.size()));
    }
    if (out.timestamps.size() != out.values.size()) {
        out.timestamps.resize(out.values.size());
        for (std::size_t i = 0; i < out.timestamps.size(); ++i)
            out.timestamps[i] = static_cast<double>(i) / frames.rate;
    }
    return out;
}

}  // namespace vision
}  // namespace shl
