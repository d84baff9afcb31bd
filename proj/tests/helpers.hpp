// Shared synthetic inputs and independent reference computations for the
// test suites. Oracles here stay deliberately naive (double loops, direct
// formulas) so they cannot share a failure mode with the library code.
#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fdb/image.hpp"

namespace testutil {

inline fdb::RealImage random_image(int w, int h, unsigned seed, double lo = 0.0,
                                   double hi = 255.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    fdb::RealImage img(w, h);
    for (auto& v : img.data) v = dist(rng);
    return img;
}

inline fdb::BinaryMask random_mask(int w, int h, unsigned seed, double fill = 0.5) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution dist(fill);
    fdb::BinaryMask mask(w, h);
    for (auto& v : mask.data) v = dist(rng) ? 1 : 0;
    return mask;
}

// Direct O((N1*N2)^2) double-loop DFT, the independent spectral oracle.
inline fdb::ComplexSpectrum naive_dft(const fdb::RealImage& img) {
    fdb::ComplexSpectrum spec(img.width, img.height);
    for (int k2 = 0; k2 < img.height; ++k2) {
        for (int k1 = 0; k1 < img.width; ++k1) {
            std::complex<double> acc{0.0, 0.0};
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    const double phase =
                        -2.0 * std::numbers::pi *
                        (static_cast<double>(k1) * x / img.width +
                         static_cast<double>(k2) * y / img.height);
                    acc += img.at(x, y) * std::polar(1.0, phase);
                }
            }
            spec.at(k1, k2) = acc;
        }
    }
    return spec;
}

// Direct inverse of a complex spectrum (unconstrained output), same spirit.
inline std::vector<std::complex<double>> naive_inverse_dft(const fdb::ComplexSpectrum& spec) {
    std::vector<std::complex<double>> out(spec.size());
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            std::complex<double> acc{0.0, 0.0};
            for (int k2 = 0; k2 < spec.height; ++k2) {
                for (int k1 = 0; k1 < spec.width; ++k1) {
                    const double phase =
                        2.0 * std::numbers::pi *
                        (static_cast<double>(k1) * x / spec.width +
                         static_cast<double>(k2) * y / spec.height);
                    acc += spec.at(k1, k2) * std::polar(1.0, phase);
                }
            }
            out[static_cast<std::size_t>(y) * spec.width + x] =
                acc / (static_cast<double>(spec.width) * spec.height);
        }
    }
    return out;
}

// Bounce reflection, written as the obvious walk rather than modular
// arithmetic.
inline int reflect_walk(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

struct RidgeDisk {
    fdb::RealImage image;
    fdb::BinaryMask truth;
};

// Oriented cosine ridge pattern inside a centered disk, flat background,
// optional additive Gaussian noise everywhere; clamped to [0,255].
inline RidgeDisk make_ridge_disk(int width, int height, double radius, double interridge,
                                 double theta, double noise_sigma, unsigned seed,
                                 double amplitude = 80.0, double background = 128.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    const double cx = width / 2.0, cy = height / 2.0;
    const double freq = 2.0 * std::numbers::pi / interridge;
    const double ux = std::cos(theta), uy = std::sin(theta);

    RidgeDisk out{fdb::RealImage(width, height), fdb::BinaryMask(width, height)};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx, dy = y - cy;
            const bool inside = dx * dx + dy * dy <= radius * radius;
            double v = background;
            if (inside) {
                v += amplitude * std::cos(freq * (dx * ux + dy * uy));
                out.truth.at(x, y) = 1;
            }
            if (noise_sigma > 0.0) v += noise(rng);
            out.image.at(x, y) = std::clamp(v, 0.0, 255.0);
        }
    }
    return out;
}

// Unique scratch directory under the system temp dir; removed by the caller.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto dir = base / ("fdb_" + tag + "_" + std::to_string(rd()) + "_" +
                           std::to_string(counter.fetch_add(1)));
        std::error_code ec;
        if (std::filesystem::create_directory(dir, ec)) return dir;
    }
    throw std::runtime_error("could not create temp dir");
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) : path(make_temp_dir(tag)) {}
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

} // namespace testutil
