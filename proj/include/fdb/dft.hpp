#pragma once

#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "fdb/image.hpp"

namespace fdb {

/// Normalized angular frequency of bin k on an n-bin axis, folded into
/// [-pi, pi). Paired bins k and n-k map to exactly negated frequencies.
inline double bin_omega(int k, int n) {
    const int signed_k = (k < (n + 1) / 2) ? k : k - n;
    return (2.0 * std::numbers::pi * signed_k) / n;
}

namespace detail {

using cvec = std::vector<std::complex<double>>;

inline const cvec& pow2_twiddles(int n) {
    thread_local std::map<int, cvec> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    cvec tw(static_cast<std::size_t>(n) / 2);
    for (int j = 0; j < n / 2; ++j)
        tw[j] = std::polar(1.0, -2.0 * std::numbers::pi * j / n);
    return cache.emplace(n, std::move(tw)).first->second;
}

// In-place iterative radix-2 Cooley-Tukey; no scaling on the inverse.
inline void fft_pow2(std::complex<double>* a, int n, bool inverse) {
    if (n <= 1) return;
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const cvec& tw = pow2_twiddles(n);
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len / 2;
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < half; ++k) {
                std::complex<double> w = tw[static_cast<std::size_t>(k) * step];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Bluestein's chirp-z reduction: the exact n-point DFT as a power-of-two
// circular convolution. Chirp exponents are reduced mod 2n before the
// complex exponential to keep the phase accurate for large indices.
struct BluesteinPlan {
    int n = 0;
    int m = 0;        // power of two >= 2n-1
    cvec chirp;       // exp(-i*pi*k^2/n), k < n
    cvec kernel_fft;  // FFT_m of the wrapped reciprocal chirp
};

inline const BluesteinPlan& bluestein_plan(int n) {
    thread_local std::map<int, std::shared_ptr<BluesteinPlan>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto plan = std::make_shared<BluesteinPlan>();
    plan->n = n;
    int m = 1;
    while (m < 2 * n - 1) m <<= 1;
    plan->m = m;

    plan->chirp.resize(n);
    for (int k = 0; k < n; ++k) {
        const long long q = (static_cast<long long>(k) * k) % (2LL * n);
        plan->chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(q) / n);
    }

    cvec kernel(static_cast<std::size_t>(m), {0.0, 0.0});
    kernel[0] = std::conj(plan->chirp[0]);
    for (int k = 1; k < n; ++k) {
        kernel[k] = std::conj(plan->chirp[k]);
        kernel[m - k] = std::conj(plan->chirp[k]);
    }
    fft_pow2(kernel.data(), m, false);
    plan->kernel_fft = std::move(kernel);

    return *cache.emplace(n, std::move(plan)).first->second;
}

inline void dft_forward_1d(std::complex<double>* a, int n) {
    if (n <= 1) return;
    if (is_pow2(n)) {
        fft_pow2(a, n, false);
        return;
    }
    const BluesteinPlan& plan = bluestein_plan(n);
    cvec buf(static_cast<std::size_t>(plan.m), {0.0, 0.0});
    for (int k = 0; k < n; ++k) buf[k] = a[k] * plan.chirp[k];
    fft_pow2(buf.data(), plan.m, false);
    for (int k = 0; k < plan.m; ++k) buf[k] *= plan.kernel_fft[k];
    fft_pow2(buf.data(), plan.m, true);
    const double scale = 1.0 / plan.m;
    for (int k = 0; k < n; ++k) a[k] = buf[k] * scale * plan.chirp[k];
}

// Unscaled 1D DFT; the inverse is the conjugated forward transform.
inline void dft_1d(std::complex<double>* a, int n, bool inverse) {
    if (!inverse) {
        dft_forward_1d(a, n);
        return;
    }
    for (int k = 0; k < n; ++k) a[k] = std::conj(a[k]);
    dft_forward_1d(a, n);
    for (int k = 0; k < n; ++k) a[k] = std::conj(a[k]);
}

// Row-column 2D transform, unscaled in both directions.
inline void dft_2d(cvec& a, int width, int height, bool inverse) {
    for (int y = 0; y < height; ++y)
        dft_1d(a.data() + static_cast<std::size_t>(y) * width, width, inverse);
    cvec col(static_cast<std::size_t>(height));
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) col[y] = a[static_cast<std::size_t>(y) * width + x];
        dft_1d(col.data(), height, inverse);
        for (int y = 0; y < height; ++y) a[static_cast<std::size_t>(y) * width + x] = col[y];
    }
}

inline cvec forward_dft_complex(const cvec& spatial, int width, int height) {
    cvec out = spatial;
    dft_2d(out, width, height, false);
    return out;
}

// Includes the 1/(width*height) normalization.
inline cvec inverse_dft_complex(const cvec& spectrum, int width, int height) {
    cvec out = spectrum;
    dft_2d(out, width, height, true);
    const double scale = 1.0 / (static_cast<double>(width) * height);
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace detail

/// Discrete 2D Fourier transform; bin (k1,k2) corresponds to the normalized
/// angular frequencies (bin_omega(k1,width), bin_omega(k2,height)).
inline ComplexSpectrum forward_dft(const RealImage& img) {
    if (img.empty()) throw std::invalid_argument("forward_dft: empty image");
    detail::cvec buf(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) buf[i] = img.data[i];
    detail::dft_2d(buf, img.width, img.height, false);
    ComplexSpectrum spec(img.width, img.height);
    spec.data = std::move(buf);
    return spec;
}

/// Inverse 2D transform; the (numerically tiny) imaginary residue is
/// discarded.
inline RealImage inverse_dft(const ComplexSpectrum& spec) {
    if (spec.empty()) throw std::invalid_argument("inverse_dft: empty spectrum");
    detail::cvec buf = detail::inverse_dft_complex(spec.data, spec.width, spec.height);
    RealImage img(spec.width, spec.height);
    for (std::size_t i = 0; i < buf.size(); ++i) img.data[i] = buf[i].real();
    return img;
}

} // namespace fdb
