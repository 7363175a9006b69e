#pragma once

#include <cstdint>
#include <vector>

#include "shl/core/image.hpp"
#include "shl/ingest/types.hpp"
#include "shl/simd/kernels.hpp"
#include "shl/vision/autoencoder.hpp"

namespace shl {

// Per-timestep novelty for one view (reconstruction error for face/game).
struct NoveltySeries {
    ViewId view = ViewId::face;
    std::vector<double> values;
    std::vector<double> timestamps;

    std::size_t size() const noexcept { return values.size(); }
    void truncate(std::size_t n);
};

namespace vision {

struct TrainOptions {
    int epochs = 10;
    int batch_size = 16;
    bool freeze_encoder = false;
    std::uint64_t seed = 0;
    simd::AdadeltaParams optimizer{};
};

struct TrainedAutoencoder {
    Autoencoder model;
    bool encoder_frozen = false;
    std::vector<double> training_log;  // mean loss per epoch
};

// Minimizes per-pixel MSE over the frames with ADADELTA on shuffled
// mini-batches. Deterministic for a given seed and kernel ISA.
TrainedAutoencoder train_autoencoder(Autoencoder model, const FrameSeries& frames,
                                     const TrainOptions& options);

// Mean squared difference over all pixels and channels.
double frame_error(const Image& original, const Image& reconstruction);

NoveltySeries reconstruction_errors(const Autoencoder& model, const FrameSeries& frames);
inline NoveltySeries reconstruction_errors(const TrainedAutoencoder& trained, const FrameSeries& frames) {
    return reconstruction_errors(trained.model, frames);
}

}  // namespace vision
}  // namespace shl
