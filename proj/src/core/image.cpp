#include "shl/core/image.hpp"

#include <algorithm>
#include <cmath>

#include "shl/core/error.hpp"

namespace shl {

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0 || channels < 0) throw InputError("negative image dimension");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(channels),
                 fill);
}

Image resize_bilinear(const Image& src, int width, int height) {
    if (src.empty()) throw InputError("resize of an empty image");
    if (width <= 0 || height <= 0) throw ConfigError("resize target must be positive");
    const int channels = src.channels();
    Image dst(width, height, channels);
    if (src.width() == width && src.height() == height) {
        std::ranges::copy(src.data(), dst.data().begin());
        return dst;
    }

    const double sx = static_cast<double>(src.width()) / width;
    const double sy = static_cast<double>(src.height()) / height;

    struct Tap {
        int lo, hi;
        float w;
    };
    auto taps = [](int n_dst, int n_src, double scale) {
        std::vector<Tap> out(static_cast<std::size_t>(n_dst));
        for (int i = 0; i < n_dst; ++i) {
            double pos = (i + 0.5) * scale - 0.5;
            pos = std::clamp(pos, 0.0, static_cast<double>(n_src - 1));
            const int lo = static_cast<int>(std::floor(pos));
            const int hi = std::min(lo + 1, n_src - 1);
            out[static_cast<std::size_t>(i)] = {lo, hi, static_cast<float>(pos - lo)};
        }
        return out;
    };
    const auto xt = taps(width, src.width(), sx);
    const auto yt = taps(height, src.height(), sy);

    for (int y = 0; y < height; ++y) {
        const Tap& ty = yt[static_cast<std::size_t>(y)];
        for (int x = 0; x < width; ++x) {
            const Tap& tx = xt[static_cast<std::size_t>(x)];
            for (int c = 0; c < channels; ++c) {
                const float top = src.at(tx.lo, ty.lo, c) * (1.0f - tx.w) + src.at(tx.hi, ty.lo, c) * tx.w;
                const float bottom =
                    src.at(tx.lo, ty.hi, c) * (1.0f - tx.w) + src.at(tx.hi, ty.hi, c) * tx.w;
                dst.at(x, y, c) = std::clamp(top * (1.0f - ty.w) + bottom * ty.w, 0.0f, 1.0f);
            }
        }
    }
    return dst;
}

}  // namespace shl
