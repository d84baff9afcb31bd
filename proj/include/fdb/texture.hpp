#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "fdb/dft.hpp"
#include "fdb/filterbank.hpp"
#include "fdb/params.hpp"

namespace fdb {

/// Per-direction complex coefficient planes, same size as the padded image.
struct SubbandCoefficients {
    int width = 0;
    int height = 0;
    std::vector<detail::cvec> planes;

    int num_planes() const { return static_cast<int>(planes.size()); }
};

enum class Synthesis { factorized, max_response, sum };
enum class ShrinkKind { soft, hard, semisoft, nonlinear };

/// Shrinkage operator selection. `beta2` applies to semisoft only and must
/// exceed `beta` there.
struct ShrinkageRule {
    ShrinkKind kind = ShrinkKind::soft;
    double beta = 0.0;
    double beta2 = 0.0;

    void validate() const {
        if (!(beta >= 0.0)) throw std::invalid_argument("ShrinkageRule: beta must be >= 0");
        if (kind == ShrinkKind::semisoft && !(beta2 > beta))
            throw std::invalid_argument("ShrinkageRule: semisoft needs beta2 > beta");
    }
};

/// Forward analysis: plane l is the inverse transform of
/// f_hat * conj(phi_hat_l), i.e. correlation with the reversed filter.
inline SubbandCoefficients analyze(const RealImage& padded, const FilterBank& bank) {
    if (padded.width != bank.width || padded.height != bank.height)
        throw std::invalid_argument("analyze: image and filter bank dimensions differ");
    const ComplexSpectrum fhat = forward_dft(padded);
    SubbandCoefficients coeffs;
    coeffs.width = padded.width;
    coeffs.height = padded.height;
    coeffs.planes.reserve(bank.spectra.size());
    detail::cvec prod(fhat.size());
    for (const ComplexSpectrum& phi : bank.spectra) {
        for (std::size_t i = 0; i < prod.size(); ++i)
            prod[i] = fhat.data[i] * std::conj(phi.data[i]);
        coeffs.planes.push_back(detail::inverse_dft_complex(prod, padded.width, padded.height));
    }
    return coeffs;
}

/// beta = C * max coefficient magnitude over all planes and positions.
inline double adaptive_beta(const SubbandCoefficients& coeffs, double C) {
    if (!(C >= 0.0)) throw std::invalid_argument("adaptive_beta: C must be >= 0");
    double max_mag = 0.0;
    for (const auto& plane : coeffs.planes)
        for (const auto& v : plane) max_mag = std::max(max_mag, std::abs(v));
    return C * max_mag;
}

/// Scalar shrinkage on a complex coefficient; the magnitude is mapped and
/// the phase kept, with T(0, beta) = 0.
inline std::complex<double> shrink(std::complex<double> x, const ShrinkageRule& rule) {
    const double m = std::abs(x);
    switch (rule.kind) {
        case ShrinkKind::soft:
            return m <= rule.beta ? std::complex<double>{} : x * ((m - rule.beta) / m);
        case ShrinkKind::hard:
            return m > rule.beta ? x : std::complex<double>{};
        case ShrinkKind::semisoft: {
            if (m <= rule.beta) return {};
            if (m >= rule.beta2) return x;
            return x * (rule.beta2 * (m - rule.beta) / ((rule.beta2 - rule.beta) * m));
        }
        case ShrinkKind::nonlinear:
            // smooth garrote
            return m <= rule.beta ? std::complex<double>{}
                                  : x * (1.0 - (rule.beta * rule.beta) / (m * m));
    }
    return {};
}

inline SubbandCoefficients apply_shrinkage(const SubbandCoefficients& coeffs,
                                           const ShrinkageRule& rule) {
    rule.validate();
    SubbandCoefficients out;
    out.width = coeffs.width;
    out.height = coeffs.height;
    out.planes.reserve(coeffs.planes.size());
    for (const auto& plane : coeffs.planes) {
        detail::cvec shrunk(plane.size());
        for (std::size_t i = 0; i < plane.size(); ++i) shrunk[i] = shrink(plane[i], rule);
        out.planes.push_back(std::move(shrunk));
    }
    return out;
}

/// Backward synthesis: sum over l of the inverse transform of
/// d_hat_l * phi_hat_l; the real part is returned.
inline RealImage synthesize_factorized(const SubbandCoefficients& coeffs, const FilterBank& bank) {
    if (coeffs.width != bank.width || coeffs.height != bank.height)
        throw std::invalid_argument("synthesize_factorized: dimensions differ");
    if (coeffs.num_planes() != bank.num_directions())
        throw std::invalid_argument("synthesize_factorized: plane count differs");
    detail::cvec acc(detail::grid_len(coeffs.width, coeffs.height), {0.0, 0.0});
    for (int l = 0; l < coeffs.num_planes(); ++l) {
        detail::cvec dhat = detail::forward_dft_complex(coeffs.planes[l], coeffs.width, coeffs.height);
        const auto& phi = bank.spectra[l].data;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += dhat[i] * phi[i];
    }
    const detail::cvec spatial = detail::inverse_dft_complex(acc, coeffs.width, coeffs.height);
    RealImage out(coeffs.width, coeffs.height);
    for (std::size_t i = 0; i < spatial.size(); ++i) out.data[i] = spatial[i].real();
    return out;
}

/// Per pixel: max over the positive plane values plus min over the negative
/// ones (real parts).
inline RealImage synthesize_max(const SubbandCoefficients& coeffs) {
    if (coeffs.planes.empty()) throw std::invalid_argument("synthesize_max: no planes");
    RealImage out(coeffs.width, coeffs.height);
    const std::size_t npix = out.size();
    for (std::size_t i = 0; i < npix; ++i) {
        double pos = 0.0, neg = 0.0;
        for (const auto& plane : coeffs.planes) {
            const double v = plane[i].real();
            pos = std::max(pos, v > 0.0 ? v : 0.0);
            neg = std::min(neg, v < 0.0 ? v : 0.0);
        }
        out.data[i] = pos + neg;
    }
    return out;
}

/// Per-pixel sum of the plane real parts.
inline RealImage synthesize_sum(const SubbandCoefficients& coeffs) {
    if (coeffs.planes.empty()) throw std::invalid_argument("synthesize_sum: no planes");
    RealImage out(coeffs.width, coeffs.height);
    for (const auto& plane : coeffs.planes)
        for (std::size_t i = 0; i < plane.size(); ++i) out.data[i] += plane[i].real();
    return out;
}

namespace detail {

inline ShrinkageRule make_adaptive_rule(ShrinkKind kind, double beta) {
    // semisoft reaches the identity at twice the threshold
    return ShrinkageRule{kind, beta, beta > 0.0 ? 2.0 * beta : 1.0};
}

} // namespace detail

/// Full texture extraction: mirror pad, analyze, threshold at
/// beta = C * max|c|, synthesize with the chosen strategy, crop back.
/// The bank must have been built for the mirror-padded size of `img`.
inline RealImage extract_texture(const RealImage& img, const FdbParams& params,
                                 const FilterBank& bank,
                                 Synthesis synthesis = Synthesis::factorized,
                                 ShrinkKind kind = ShrinkKind::soft) {
    params.validate();
    const RealImage padded = mirror_pad(img, params.pad_margin);
    if (padded.width != bank.width || padded.height != bank.height)
        throw std::invalid_argument("extract_texture: bank not built for the padded image size");

    SubbandCoefficients coeffs = analyze(padded, bank);
    const double beta = adaptive_beta(coeffs, params.C);
    coeffs = apply_shrinkage(coeffs, detail::make_adaptive_rule(kind, beta));

    RealImage full;
    switch (synthesis) {
        case Synthesis::factorized: full = synthesize_factorized(coeffs, bank); break;
        case Synthesis::max_response: full = synthesize_max(coeffs); break;
        case Synthesis::sum: full = synthesize_sum(coeffs); break;
    }
    return crop(full, params.pad_margin);
}

} // namespace fdb
