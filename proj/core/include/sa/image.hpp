#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sa {

// Row-major H x W x C grid of float values. Used for HDR radiance,
// rendered images and per-pixel parameter maps alike.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> data;

    Image() = default;
    Image(int h, int w, int c, float fill = 0.0f)
        : height(h), width(w), channels(c), data(static_cast<size_t>(h) * w * c, fill) {
        if (h <= 0 || w <= 0 || c <= 0) throw std::invalid_argument("Image: non-positive dims");
    }

    float& at(int y, int x, int c) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    float at(int y, int x, int c) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    size_t size() const { return data.size(); }
    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

inline double image_mean(const Image& img) {
    double s = 0.0;
    for (float v : img.data) s += v;
    return img.data.empty() ? 0.0 : s / static_cast<double>(img.data.size());
}

inline double channel_mean(const Image& img, int c) {
    double s = 0.0;
    size_t n = static_cast<size_t>(img.height) * img.width;
    for (size_t p = 0; p < n; ++p) s += img.data[p * img.channels + c];
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

}  // namespace sa
