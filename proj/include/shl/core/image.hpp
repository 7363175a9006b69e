#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shl {

// Interleaved (HWC) float image. Pixel values are expected in [0, 1].
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels = 3, float fill = 0.0f);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    float& at(int x, int y, int c) noexcept { return data_[index(x, y, c)]; }
    float at(int x, int y, int c) const noexcept { return data_[index(x, y, c)]; }

    std::span<float> data() noexcept { return data_; }
    std::span<const float> data() const noexcept { return data_; }

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(channels_) +
               static_cast<std::size_t>(c);
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

// Bilinear resize with half-pixel centers (the usual "align corners = false"
// convention). Aspect ratio is not preserved.
Image resize_bilinear(const Image& src, int width, int height);

}  // namespace shl
