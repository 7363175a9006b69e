#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shl/core/image.hpp"
#include "shl/simd/kernels.hpp"

namespace shl::vision {

struct Shape3 {
    int channels = 0;
    int height = 0;
    int width = 0;

    std::size_t size() const noexcept {
        return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
               static_cast<std::size_t>(width);
    }
    friend bool operator==(const Shape3&, const Shape3&) = default;
};

std::string to_string(const Shape3& s);

// One VGG-style encoder stage: `convs` 3x3 convolutions with `filters`
// output channels, followed by a 2x2 stride-2 max pool.
struct StageSpec {
    int convs = 0;
    int filters = 0;
    friend bool operator==(const StageSpec&, const StageSpec&) = default;
};

struct AutoencoderSpec {
    int height = 224;
    int width = 224;
    int channels = 3;
    std::vector<StageSpec> stages;

    // VGG16 convolutional trunk (2x64, 2x128, 3x256, 3x512, 3x512).
    static AutoencoderSpec vgg16(int size = 224);

    // Same five-stage topology with narrow stages for desk-scale runs.
    static AutoencoderSpec compact(int size, std::vector<StageSpec> stages);

    int bottleneck_filters() const noexcept { return stages.empty() ? channels : stages.back().filters; }
    Shape3 input_shape() const noexcept { return {channels, height, width}; }
    Shape3 bottleneck_shape() const;

    // Throws ConfigError for empty stage lists or spatial dims that do not
    // divide by 2^stages.
    void validate() const;

    friend bool operator==(const AutoencoderSpec&, const AutoencoderSpec&) = default;
};

// "2x64,2x128" <-> stage list.
std::vector<StageSpec> parse_stages(const std::string& text);
std::string format_stages(const std::vector<StageSpec>& stages);

enum class LayerKind { conv, max_pool, upsample };
enum class Activation { none, relu, sigmoid };

struct LayerDesc {
    std::string name;
    LayerKind kind;
    Shape3 input;
    Shape3 output;
    Activation activation = Activation::none;
    bool encoder = false;
    // Offsets into the flat parameter vector (conv layers only).
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
};

struct ParameterInfo {
    std::string name;
    std::vector<int> dims;
    std::size_t offset = 0;
    std::size_t count = 0;
    bool encoder = false;
};

struct Workspace;

// Convolutional autoencoder: VGG-like encoder stages, mirrored decoder with
// nearest-neighbour upsampling, sigmoid output bounded to [0, 1].
class Autoencoder {
public:
    explicit Autoencoder(AutoencoderSpec spec, std::uint64_t init_seed = 0);

    const AutoencoderSpec& spec() const noexcept { return spec_; }
    const std::vector<LayerDesc>& layers() const noexcept { return layers_; }
    const std::vector<ParameterInfo>& parameters() const noexcept { return params_; }
    Shape3 bottleneck_shape() const noexcept { return bottleneck_; }
    std::size_t encoder_parameter_count() const noexcept { return encoder_param_count_; }

    std::span<float> weights() noexcept { return weights_; }
    std::span<const float> weights() const noexcept { return weights_; }
    std::span<const float> encoder_weights() const noexcept {
        return std::span<const float>(weights_).first(encoder_param_count_);
    }

    // Re-draws every weight with fan-in scaled normal noise.
    void initialize(std::uint64_t seed);

    Image reconstruct(const Image& frame) const;

    // Planar (CHW) forward pass; `output` must hold input_shape().size() floats.
    void forward(std::span<const float> input, std::span<float> output, Workspace& ws) const;

    // Forward + backward for one sample with per-pixel MSE loss. Gradients
    // accumulate into `grads` (same layout as weights()). Returns the loss.
    // With freeze_encoder the backward pass stops at the bottleneck.
    double accumulate_gradients(std::span<const float> input, std::span<float> grads, Workspace& ws,
                                bool freeze_encoder) const;

    void save(const std::filesystem::path& path) const;
    static Autoencoder load(const std::filesystem::path& path);

    // Copies every "encoder.*" tensor from a weight archive; names and shapes
    // must match this model.
    void load_encoder_weights(const std::filesystem::path& path);

private:
    void build();

    AutoencoderSpec spec_;
    std::vector<LayerDesc> layers_;
    std::vector<ParameterInfo> params_;
    std::vector<float> weights_;
    Shape3 bottleneck_;
    std::size_t encoder_param_count_ = 0;
};

// Scratch buffers reused across forward/backward passes of one model.
struct Workspace {
    std::vector<std::vector<float>> activations;  // input of layer i at index i; final output last
    std::vector<std::vector<std::uint32_t>> argmax;
    std::vector<float> columns;
    std::vector<float> grad_a;
    std::vector<float> grad_b;
    std::vector<float> weight_t;
};

Autoencoder build_autoencoder(const AutoencoderSpec& spec, std::uint64_t init_seed = 0);

// HWC image <-> CHW planar buffer.
std::vector<float> to_planar(const Image& image);
Image from_planar(std::span<const float> planar, const Shape3& shape);

}  // namespace shl::vision
