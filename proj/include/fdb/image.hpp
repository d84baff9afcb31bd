#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fdb {

namespace detail {

inline std::size_t grid_len(int width, int height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("grid dimensions must be >= 1");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

} // namespace detail

/// 2D grid of real intensities, row-major. Input fingerprints live in
/// [0,255]; feature images are unrestricted reals.
struct RealImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    RealImage() = default;
    RealImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(detail::grid_len(w, h), fill) {}

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

/// 2D grid of complex frequency coefficients; dimensions match the
/// originating spatial image.
struct ComplexSpectrum {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> data;

    ComplexSpectrum() = default;
    ComplexSpectrum(int w, int h)
        : width(w), height(h), data(detail::grid_len(w, h)) {}

    std::complex<double>& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::complex<double> at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

/// 2D grid of {0,1}; 1 = foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(detail::grid_len(w, h), fill) {}

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    std::size_t count_foreground() const {
        std::size_t c = 0;
        for (auto v : data) c += v;
        return c;
    }
};

namespace detail {

// Whole-sample reflection that excludes the edge pixel from repetition:
// ..., f[2], f[1], f[0], f[1], f[2], ...
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

} // namespace detail

/// Mirror-pad by `margin` pixels on every side. The reflection must not
/// reach past the opposite edge, so margin < min(width, height).
inline RealImage mirror_pad(const RealImage& img, int margin) {
    if (img.empty()) throw std::invalid_argument("mirror_pad: empty image");
    if (margin < 0) throw std::invalid_argument("mirror_pad: negative margin");
    if (margin >= std::min(img.width, img.height))
        throw std::invalid_argument("mirror_pad: margin too large for image");
    if (margin == 0) return img;

    RealImage out(img.width + 2 * margin, img.height + 2 * margin);
    for (int y = 0; y < out.height; ++y) {
        const int sy = detail::reflect_index(y - margin, img.height);
        for (int x = 0; x < out.width; ++x) {
            const int sx = detail::reflect_index(x - margin, img.width);
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

/// Central region after removing `margin` pixels from every side.
inline RealImage crop(const RealImage& img, int margin) {
    if (img.empty()) throw std::invalid_argument("crop: empty image");
    if (margin < 0) throw std::invalid_argument("crop: negative margin");
    if (2 * margin >= img.width || 2 * margin >= img.height)
        throw std::invalid_argument("crop: margin too large for image");
    if (margin == 0) return img;

    RealImage out(img.width - 2 * margin, img.height - 2 * margin);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = img.at(x + margin, y + margin);
    return out;
}

/// Uniform rescale by `factor` with bilinear interpolation (edge clamped).
inline RealImage resize_bilinear(const RealImage& img, double factor) {
    if (img.empty()) throw std::invalid_argument("resize_bilinear: empty image");
    if (!(factor > 0.0)) throw std::invalid_argument("resize_bilinear: factor must be positive");
    const int ow = std::max(1, static_cast<int>(std::lround(img.width * factor)));
    const int oh = std::max(1, static_cast<int>(std::lround(img.height * factor)));
    if (ow == img.width && oh == img.height) return img;

    RealImage out(ow, oh);
    const double sx_scale = static_cast<double>(img.width) / ow;
    const double sy_scale = static_cast<double>(img.height) / oh;
    for (int y = 0; y < oh; ++y) {
        const double sy = (y + 0.5) * sy_scale - 0.5;
        const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, img.height - 1);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = std::clamp(sy - y0, 0.0, 1.0);
        for (int x = 0; x < ow; ++x) {
            const double sx = (x + 0.5) * sx_scale - 0.5;
            const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, img.width - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = std::clamp(sx - x0, 0.0, 1.0);
            const double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
            const double bot = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
            out.at(x, y) = top * (1.0 - fy) + bot * fy;
        }
    }
    return out;
}

/// Nearest-neighbour rescale of a mask to an explicit target size; keeps
/// values in {0,1}.
inline BinaryMask resize_mask_nearest(const BinaryMask& mask, int target_width, int target_height) {
    if (mask.empty()) throw std::invalid_argument("resize_mask_nearest: empty mask");
    BinaryMask out(target_width, target_height);
    for (int y = 0; y < target_height; ++y) {
        int sy = std::min(static_cast<int>((y + 0.5) * mask.height / target_height), mask.height - 1);
        for (int x = 0; x < target_width; ++x) {
            int sx = std::min(static_cast<int>((x + 0.5) * mask.width / target_width), mask.width - 1);
            out.at(x, y) = mask.at(sx, sy);
        }
    }
    return out;
}

} // namespace fdb
