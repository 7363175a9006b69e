#include "shl/vision/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "shl/core/archive.hpp"
#include "shl/core/error.hpp"

namespace shl::vision {
namespace {

constexpr int kKernel = 3;
constexpr int kTaps = kKernel * kKernel;

// 3x3, stride 1, zero padding 1. col is (cin*9) x (h*w).
void im2col(const float* in, int cin, int h, int w, float* col) {
    const std::size_t hw = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    for (int c = 0; c < cin; ++c) {
        const float* plane = in + static_cast<std::size_t>(c) * hw;
        for (int ky = 0; ky < kKernel; ++ky) {
            for (int kx = 0; kx < kKernel; ++kx) {
                float* row = col + (static_cast<std::size_t>(c) * kTaps + ky * kKernel + kx) * hw;
                const int dx = kx - 1;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ky - 1;
                    float* dst = row + static_cast<std::size_t>(y) * w;
                    if (sy < 0 || sy >= h) {
                        std::memset(dst, 0, sizeof(float) * static_cast<std::size_t>(w));
                        continue;
                    }
                    const float* src = plane + static_cast<std::size_t>(sy) * w;
                    const int x0 = std::max(0, -dx);
                    const int x1 = std::min(w, w - dx);
                    for (int x = 0; x < x0; ++x) dst[x] = 0.0f;
                    std::memcpy(dst + x0, src + x0 + dx, sizeof(float) * static_cast<std::size_t>(x1 - x0));
                    for (int x = x1; x < w; ++x) dst[x] = 0.0f;
                }
            }
        }
    }
}

// Transposed layout: (h*w) x (cin*9).
void im2col_transposed(const float* in, int cin, int h, int w, float* colt) {
    const std::size_t hw = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    const std::size_t k = static_cast<std::size_t>(cin) * kTaps;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float* dst = colt + (static_cast<std::size_t>(y) * w + x) * k;
            for (int c = 0; c < cin; ++c) {
                const float* plane = in + static_cast<std::size_t>(c) * hw;
                for (int ky = 0; ky < kKernel; ++ky) {
                    const int sy = y + ky - 1;
                    for (int kx = 0; kx < kKernel; ++kx) {
                        const int sx = x + kx - 1;
                        *dst++ = (sy < 0 || sy >= h || sx < 0 || sx >= w)
                                     ? 0.0f
                                     : plane[static_cast<std::size_t>(sy) * w + sx];
                    }
                }
            }
        }
    }
}

void col2im(const float* col, int cin, int h, int w, float* out) {
    const std::size_t hw = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    std::memset(out, 0, sizeof(float) * hw * static_cast<std::size_t>(cin));
    for (int c = 0; c < cin; ++c) {
        float* plane = out + static_cast<std::size_t>(c) * hw;
        for (int ky = 0; ky < kKernel; ++ky) {
            for (int kx = 0; kx < kKernel; ++kx) {
                const float* row = col + (static_cast<std::size_t>(c) * kTaps + ky * kKernel + kx) * hw;
                const int dx = kx - 1;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ky - 1;
                    if (sy < 0 || sy >= h) continue;
                    const float* src = row + static_cast<std::size_t>(y) * w;
                    float* dst = plane + static_cast<std::size_t>(sy) * w;
                    const int x0 = std::max(0, -dx);
                    const int x1 = std::min(w, w - dx);
                    for (int x = x0; x < x1; ++x) dst[x + dx] += src[x];
                }
            }
        }
    }
}

void transpose(const float* src, int rows, int cols, float* dst) {
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            dst[static_cast<std::size_t>(c) * rows + r] = src[static_cast<std::size_t>(r) * cols + c];
}

void conv_forward(const LayerDesc& layer, std::span<const float> weights, const float* in, float* out,
                  std::vector<float>& columns) {
    const auto& k = simd::kernels();
    const int cin = layer.input.channels;
    const int cout = layer.output.channels;
    const int h = layer.input.height;
    const int w = layer.input.width;
    const int hw = h * w;
    const int depth = cin * kTaps;
    columns.resize(static_cast<std::size_t>(depth) * static_cast<std::size_t>(hw));
    im2col(in, cin, h, w, columns.data());
    const float* wt = weights.data() + layer.weight_offset;
    const float* bias = weights.data() + layer.bias_offset;
    k.gemm(cout, hw, depth, wt, depth, columns.data(), hw, out, hw, false);
    for (int o = 0; o < cout; ++o) {
        float* row = out + static_cast<std::size_t>(o) * hw;
        const float b = bias[o];
        switch (layer.activation) {
            case Activation::relu:
                for (int i = 0; i < hw; ++i) row[i] = std::max(0.0f, row[i] + b);
                break;
            case Activation::sigmoid:
                for (int i = 0; i < hw; ++i) row[i] = 1.0f / (1.0f + std::exp(-(row[i] + b)));
                break;
            case Activation::none:
                for (int i = 0; i < hw; ++i) row[i] += b;
                break;
        }
    }
}

void maxpool_forward(const LayerDesc& layer, const float* in, float* out, std::vector<std::uint32_t>& argmax) {
    const int c = layer.input.channels;
    const int h = layer.input.height;
    const int w = layer.input.width;
    const int oh = layer.output.height;
    const int ow = layer.output.width;
    argmax.resize(layer.output.size());
    for (int ch = 0; ch < c; ++ch) {
        const float* plane = in + static_cast<std::size_t>(ch) * h * w;
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                std::uint32_t best = static_cast<std::uint32_t>((2 * y) * w + 2 * x);
                float bv = plane[best];
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        const auto idx = static_cast<std::uint32_t>((2 * y + dy) * w + 2 * x + dx);
                        if (plane[idx] > bv) {
                            bv = plane[idx];
                            best = idx;
                        }
                    }
                }
                const std::size_t o = (static_cast<std::size_t>(ch) * oh + y) * ow + x;
                out[o] = bv;
                argmax[o] = best;
            }
        }
    }
}

void upsample_forward(const LayerDesc& layer, const float* in, float* out) {
    const int c = layer.input.channels;
    const int h = layer.input.height;
    const int w = layer.input.width;
    const int ow = layer.output.width;
    for (int ch = 0; ch < c; ++ch) {
        const float* plane = in + static_cast<std::size_t>(ch) * h * w;
        float* oplane = out + static_cast<std::size_t>(ch) * layer.output.height * ow;
        for (int y = 0; y < layer.output.height; ++y)
            for (int x = 0; x < ow; ++x)
                oplane[static_cast<std::size_t>(y) * ow + x] = plane[static_cast<std::size_t>(y / 2) * w + x / 2];
    }
}

void run_forward(const std::vector<LayerDesc>& layers, std::span<const float> weights,
                 std::span<const float> input, Workspace& ws) {
    ws.activations.resize(layers.size() + 1);
    ws.argmax.resize(layers.size());
    ws.activations[0].assign(input.begin(), input.end());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerDesc& layer = layers[i];
        auto& out = ws.activations[i + 1];
        out.resize(layer.output.size());
        const float* in = ws.activations[i].data();
        switch (layer.kind) {
            case LayerKind::conv: conv_forward(layer, weights, in, out.data(), ws.columns); break;
            case LayerKind::max_pool: maxpool_forward(layer, in, out.data(), ws.argmax[i]); break;
            case LayerKind::upsample: upsample_forward(layer, in, out.data()); break;
        }
    }
}

}  // namespace

std::string to_string(const Shape3& s) {
    return "(" + std::to_string(s.height) + "," + std::to_string(s.width) + "," +
           std::to_string(s.channels) + ")";
}

AutoencoderSpec AutoencoderSpec::vgg16(int size) {
    AutoencoderSpec spec;
    spec.height = size;
    spec.width = size;
    spec.stages = {{2, 64}, {2, 128}, {3, 256}, {3, 512}, {3, 512}};
    return spec;
}

AutoencoderSpec AutoencoderSpec::compact(int size, std::vector<StageSpec> stages) {
    AutoencoderSpec spec;
    spec.height = size;
    spec.width = size;
    spec.stages = std::move(stages);
    return spec;
}

Shape3 AutoencoderSpec::bottleneck_shape() const {
    validate();
    const int div = 1 << stages.size();
    return {bottleneck_filters(), height / div, width / div};
}

void AutoencoderSpec::validate() const {
    if (stages.empty()) throw ConfigError("autoencoder needs at least one stage");
    if (stages.size() > 10) throw ConfigError("too many autoencoder stages");
    if (channels <= 0 || height <= 0 || width <= 0) throw ConfigError("autoencoder input shape must be positive");
    for (const auto& s : stages)
        if (s.convs < 1 || s.filters < 1) throw ConfigError("every stage needs >= 1 conv and >= 1 filter");
    const int div = 1 << stages.size();
    if (height % div != 0 || width % div != 0)
        throw ConfigError("input " + std::to_string(height) + "x" + std::to_string(width) +
                          " is not divisible by 2^" + std::to_string(stages.size()));
}

std::vector<StageSpec> parse_stages(const std::string& text) {
    std::vector<StageSpec> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto trimmed_begin = item.find_first_not_of(" \t");
        if (trimmed_begin == std::string::npos) continue;
        item = item.substr(trimmed_begin, item.find_last_not_of(" \t") - trimmed_begin + 1);
        const auto x = item.find('x');
        if (x == std::string::npos) throw ConfigError("stage '" + item + "' is not of the form <convs>x<filters>");
        try {
            std::size_t used = 0;
            StageSpec s{std::stoi(item.substr(0, x), &used), 0};
            std::size_t used2 = 0;
            s.filters = std::stoi(item.substr(x + 1), &used2);
            if (used != x || used2 != item.size() - x - 1) throw std::invalid_argument(item);
            out.push_back(s);
        } catch (const std::logic_error&) {
            throw ConfigError("stage '" + item + "' is not of the form <convs>x<filters>");
        }
    }
    if (out.empty()) throw ConfigError("empty stage list");
    return out;
}

std::string format_stages(const std::vector<StageSpec>& stages) {
    std::string out;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(stages[i].convs) + "x" + std::to_string(stages[i].filters);
    }
    return out;
}

Autoencoder::Autoencoder(AutoencoderSpec spec, std::uint64_t init_seed) : spec_(std::move(spec)) {
    spec_.validate();
    build();
    initialize(init_seed);
}

void Autoencoder::build() {
    layers_.clear();
    params_.clear();
    std::size_t offset = 0;
    Shape3 cur = spec_.input_shape();

    auto add_conv = [&](std::string name, int out_channels, Activation act, bool encoder) {
        LayerDesc l{std::move(name), LayerKind::conv, cur, {out_channels, cur.height, cur.width}, act, encoder};
        const int fan_in = cur.channels * kTaps;
        l.weight_offset = offset;
        params_.push_back({l.name + ".weight", {out_channels, cur.channels, kKernel, kKernel}, offset,
                           static_cast<std::size_t>(out_channels) * fan_in, encoder});
        offset += params_.back().count;
        l.bias_offset = offset;
        params_.push_back({l.name + ".bias", {out_channels}, offset, static_cast<std::size_t>(out_channels), encoder});
        offset += params_.back().count;
        cur = l.output;
        layers_.push_back(std::move(l));
    };

    const auto& st = spec_.stages;
    for (std::size_t s = 0; s < st.size(); ++s) {
        const std::string block = "encoder.block" + std::to_string(s + 1);
        for (int c = 0; c < st[s].convs; ++c)
            add_conv(block + ".conv" + std::to_string(c + 1), st[s].filters, Activation::relu, true);
        Shape3 pooled{cur.channels, cur.height / 2, cur.width / 2};
        layers_.push_back({block + ".pool", LayerKind::max_pool, cur, pooled, Activation::none, true});
        cur = pooled;
    }
    bottleneck_ = cur;
    encoder_param_count_ = offset;

    for (std::size_t s = st.size(); s-- > 0;) {
        const std::string block = "decoder.block" + std::to_string(s + 1);
        Shape3 up{cur.channels, cur.height * 2, cur.width * 2};
        layers_.push_back({block + ".upsample", LayerKind::upsample, cur, up, Activation::none, false});
        cur = up;
        for (int c = 0; c < st[s].convs; ++c)
            add_conv(block + ".conv" + std::to_string(c + 1), st[s].filters, Activation::relu, false);
    }
    add_conv("decoder.output", spec_.channels, Activation::sigmoid, false);
    weights_.assign(offset, 0.0f);
}

void Autoencoder::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (const auto& p : params_) {
        float* dst = weights_.data() + p.offset;
        if (p.dims.size() == 1) {
            std::fill(dst, dst + p.count, 0.0f);
            continue;
        }
        const int fan_in = p.dims[1] * p.dims[2] * p.dims[3];
        std::normal_distribution<float> dist(0.0f, std::sqrt(2.0f / static_cast<float>(fan_in)));
        for (std::size_t i = 0; i < p.count; ++i) dst[i] = dist(rng);
    }
}

void Autoencoder::forward(std::span<const float> input, std::span<float> output, Workspace& ws) const {
    if (input.size() != spec_.input_shape().size() || output.size() != input.size())
        throw InputError("autoencoder input has the wrong size");
    run_forward(layers_, weights_, input, ws);
    std::ranges::copy(ws.activations.back(), output.begin());
}

Image Autoencoder::reconstruct(const Image& frame) const {
    if (frame.width() != spec_.width || frame.height() != spec_.height || frame.channels() != spec_.channels)
        throw InputError("frame shape does not match the autoencoder input");
    Workspace ws;
    const auto planar = to_planar(frame);
    std::vector<float> out(planar.size());
    forward(planar, out, ws);
    return from_planar(out, spec_.input_shape());
}

double Autoencoder::accumulate_gradients(std::span<const float> input, std::span<float> grads,
                                         Workspace& ws, bool freeze_encoder) const {
    if (input.size() != spec_.input_shape().size()) throw InputError("autoencoder input has the wrong size");
    if (grads.size() != weights_.size()) throw InputError("gradient buffer has the wrong size");
    const auto& k = simd::kernels();
    run_forward(layers_, weights_, input, ws);

    const auto& out = ws.activations.back();
    const std::size_t n = out.size();
    const double loss = k.sum_squared_diff(out.data(), input.data(), n) / static_cast<double>(n);

    // dL/dy for L = mean((y - x)^2)
    auto& g = ws.grad_a;
    g.resize(n);
    const float scale = 2.0f / static_cast<float>(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = scale * (out[i] - input[i]);

    std::size_t stop = 0;
    if (freeze_encoder) {
        while (stop < layers_.size() && layers_[stop].encoder) ++stop;
    }

    for (std::size_t li = layers_.size(); li-- > stop;) {
        const LayerDesc& layer = layers_[li];
        const bool need_input_grad = li > stop;
        auto& gin = ws.grad_b;
        const float* in = ws.activations[li].data();
        const float* y = ws.activations[li + 1].data();

        switch (layer.kind) {
            case LayerKind::conv: {
                const int cin = layer.input.channels;
                const int cout = layer.output.channels;
                const int h = layer.input.height;
                const int w = layer.input.width;
                const int hw = h * w;
                const int depth = cin * kTaps;
                if (layer.activation == Activation::relu) {
                    for (std::size_t i = 0; i < g.size(); ++i)
                        if (y[i] <= 0.0f) g[i] = 0.0f;
                } else if (layer.activation == Activation::sigmoid) {
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= y[i] * (1.0f - y[i]);
                }
                float* gb = grads.data() + layer.bias_offset;
                for (int o = 0; o < cout; ++o) {
                    const float* row = g.data() + static_cast<std::size_t>(o) * hw;
                    double sum = 0.0;
                    for (int i = 0; i < hw; ++i) sum += row[i];
                    gb[o] += static_cast<float>(sum);
                }
                ws.columns.resize(static_cast<std::size_t>(hw) * depth);
                im2col_transposed(in, cin, h, w, ws.columns.data());
                k.gemm(cout, depth, hw, g.data(), hw, ws.columns.data(), depth,
                       grads.data() + layer.weight_offset, depth, true);
                if (need_input_grad) {
                    ws.weight_t.resize(static_cast<std::size_t>(depth) * cout);
                    transpose(weights_.data() + layer.weight_offset, cout, depth, ws.weight_t.data());
                    ws.columns.resize(static_cast<std::size_t>(depth) * hw);
                    k.gemm(depth, hw, cout, ws.weight_t.data(), cout, g.data(), hw, ws.columns.data(), hw, false);
                    gin.resize(layer.input.size());
                    col2im(ws.columns.data(), cin, h, w, gin.data());
                }
                break;
            }
            case LayerKind::max_pool: {
                if (!need_input_grad) break;
                gin.assign(layer.input.size(), 0.0f);
                const std::size_t plane_in = static_cast<std::size_t>(layer.input.height) * layer.input.width;
                const std::size_t plane_out = static_cast<std::size_t>(layer.output.height) * layer.output.width;
                const auto& am = ws.argmax[li];
                for (int ch = 0; ch < layer.input.channels; ++ch)
                    for (std::size_t o = 0; o < plane_out; ++o) {
                        const std::size_t idx = ch * plane_out + o;
                        gin[ch * plane_in + am[idx]] += g[idx];
                    }
                break;
            }
            case LayerKind::upsample: {
                if (!need_input_grad) break;
                gin.assign(layer.input.size(), 0.0f);
                const int iw = layer.input.width;
                const int ow = layer.output.width;
                for (int ch = 0; ch < layer.input.channels; ++ch) {
                    float* dst = gin.data() + static_cast<std::size_t>(ch) * layer.input.height * iw;
                    const float* src = g.data() + static_cast<std::size_t>(ch) * layer.output.height * ow;
                    for (int yy = 0; yy < layer.output.height; ++yy)
                        for (int xx = 0; xx < ow; ++xx)
                            dst[static_cast<std::size_t>(yy / 2) * iw + xx / 2] += src[static_cast<std::size_t>(yy) * ow + xx];
                }
                break;
            }
        }
        if (need_input_grad) std::swap(g, gin);
    }
    return loss;
}

namespace {

NamedArrayArchive to_archive(const Autoencoder& model) {
    NamedArrayArchive ar;
    const auto& spec = model.spec();
    ar.metadata["kind"] = "autoencoder";
    ar.metadata["height"] = std::to_string(spec.height);
    ar.metadata["width"] = std::to_string(spec.width);
    ar.metadata["channels"] = std::to_string(spec.channels);
    ar.metadata["stages"] = format_stages(spec.stages);
    for (const auto& p : model.parameters())
        ar.put(p.name, p.dims, model.weights().subspan(p.offset, p.count));
    return ar;
}

}  // namespace

void Autoencoder::save(const std::filesystem::path& path) const { to_archive(*this).save(path); }

Autoencoder Autoencoder::load(const std::filesystem::path& path) {
    const auto ar = NamedArrayArchive::load(path);
    if (ar.meta("kind") != "autoencoder") throw ParseError(path.string() + " is not an autoencoder archive");
    AutoencoderSpec spec;
    try {
        spec.height = std::stoi(ar.meta("height"));
        spec.width = std::stoi(ar.meta("width"));
        spec.channels = std::stoi(ar.meta("channels"));
    } catch (const std::logic_error&) {
        throw ParseError("bad autoencoder metadata in " + path.string());
    }
    spec.stages = parse_stages(ar.meta("stages"));
    Autoencoder model(std::move(spec));
    for (const auto& p : model.params_) {
        const auto values = ar.floats(p.name, p.dims);
        std::ranges::copy(values, model.weights_.begin() + static_cast<std::ptrdiff_t>(p.offset));
    }
    return model;
}

void Autoencoder::load_encoder_weights(const std::filesystem::path& path) {
    const auto ar = NamedArrayArchive::load(path);
    std::size_t copied = 0;
    for (const auto& p : params_) {
        if (!p.encoder) continue;
        const auto values = ar.floats(p.name, p.dims);
        std::ranges::copy(values, weights_.begin() + static_cast<std::ptrdiff_t>(p.offset));
        ++copied;
    }
    if (copied == 0) throw ParseError("no encoder tensors in " + path.string());
}

Autoencoder build_autoencoder(const AutoencoderSpec& spec, std::uint64_t init_seed) {
    return Autoencoder(spec, init_seed);
}

std::vector<float> to_planar(const Image& image) {
    const int w = image.width();
    const int h = image.height();
    const int c = image.channels();
    std::vector<float> out(image.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int ch = 0; ch < c; ++ch)
                out[(static_cast<std::size_t>(ch) * h + y) * w + x] = image.at(x, y, ch);
    return out;
}

Image from_planar(std::span<const float> planar, const Shape3& shape) {
    if (planar.size() != shape.size()) throw InputError("planar buffer size mismatch");
    Image img(shape.width, shape.height, shape.channels);
    for (int y = 0; y < shape.height; ++y)
        for (int x = 0; x < shape.width; ++x)
            for (int ch = 0; ch < shape.channels; ++ch)
                img.at(x, y, ch) = planar[(static_cast<std::size_t>(ch) * shape.height + y) * shape.width + x];
    return img;
}

}  // namespace shl::vision
