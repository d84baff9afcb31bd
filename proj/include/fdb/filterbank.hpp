#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fdb/dft.hpp"
#include "fdb/image.hpp"

namespace fdb {

namespace detail {

inline double pow_int(double base, int exponent) {
    double r = 1.0;
    while (exponent > 0) {
        if (exponent & 1) r *= base;
        base *= base;
        exponent >>= 1;
    }
    return r;
}

// (-i)^n
inline std::complex<double> minus_i_pow(int n) {
    switch (n & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

} // namespace detail

/// Butterworth bandpass parameters: cutoffs in radians/sample and order.
struct BandpassSpec {
    double omega_low = 0.3;
    double omega_high = 1.0;
    int gamma = 1;

    void validate() const {
        if (!(omega_low > 0.0) || !(omega_high > omega_low) || !(omega_high <= std::numbers::pi))
            throw std::invalid_argument("BandpassSpec: need 0 < omega_low < omega_high <= pi");
        if (gamma < 1) throw std::invalid_argument("BandpassSpec: gamma must be >= 1");
    }
    double delta() const { return omega_high - omega_low; }
    double peak_squared() const { return omega_low * omega_high; }
    double peak() const { return std::sqrt(peak_squared()); }
};

/// Direction count L and Hilbert order n; direction l points at pi*l/L.
struct DirectionalSpec {
    int num_directions = 16;
    int order = 20;

    void validate() const {
        if (num_directions < 1) throw std::invalid_argument("DirectionalSpec: L must be >= 1");
        if (order < 1) throw std::invalid_argument("DirectionalSpec: n must be >= 1");
    }
    double angle(int l) const { return std::numbers::pi * l / num_directions; }
};

/// Ideal bandpass magnitude: sqrt((w*D)^2g / ((w*D)^2g + (w^2-p^2)^2g)).
/// 1 at the geometric mean p, exactly 1/sqrt(2) at both cutoffs.
inline double butterworth_ideal_magnitude(double omega, const BandpassSpec& spec) {
    const double u = omega * spec.delta();
    const double v = omega * omega - spec.peak_squared();
    const double num = detail::pow_int(u * u, spec.gamma);
    const double den = num + detail::pow_int(v * v, spec.gamma);
    if (num == 0.0) return 0.0;
    return std::sqrt(num / den);
}

/// One analytic factor B(jw) of the squared bandpass, b^2(w) = B(jw)B(-jw),
/// built from the roots t_k = exp(i*pi*(gamma+2k-1)/(2*gamma)).
inline std::complex<double> analog_transfer_factor(double omega, const BandpassSpec& spec) {
    const std::complex<double> jw(0.0, omega);
    const std::complex<double> jw2 = jw * jw;
    const double d = spec.delta();
    const double p2 = spec.peak_squared();
    std::complex<double> acc(1.0, 0.0);
    for (int k = 1; k <= spec.gamma; ++k) {
        const std::complex<double> tk =
            std::polar(1.0, std::numbers::pi * (spec.gamma + 2 * k - 1) / (2.0 * spec.gamma));
        acc *= (d * jw) / (jw2 - d * tk * jw + p2);
    }
    return acc;
}

/// Digital factor after the bilinear substitution jw ~ 2(z-1)/(z+1) with
/// z = exp(i*omega); satisfies |B(e^{iw})| = b(2*tan(w/2)).
inline std::complex<double> digital_transfer_factor(double omega, const BandpassSpec& spec) {
    const std::complex<double> z = std::polar(1.0, omega);
    const std::complex<double> z2 = z * z;
    const double d = spec.delta();
    const double p2 = spec.peak_squared();
    const std::complex<double> num = 2.0 * d * (z2 - 1.0);
    std::complex<double> acc(1.0, 0.0);
    for (int k = 1; k <= spec.gamma; ++k) {
        const std::complex<double> tk =
            std::polar(1.0, std::numbers::pi * (spec.gamma + 2 * k - 1) / (2.0 * spec.gamma));
        const std::complex<double> den =
            (4.0 + p2 - 2.0 * d * tk) * z2 + (2.0 * p2 - 8.0) * z + (4.0 + p2 + 2.0 * d * tk);
        acc *= num / den;
    }
    return acc;
}

/// 2D Butterworth spectrum on a width x height bin grid. Each bin takes the
/// 1D digital factor along its dominant axis; ties |w1| = |w2| go to the
/// horizontal branch so the two branches partition the plane.
inline ComplexSpectrum butterworth_2d_spectrum(int width, int height, const BandpassSpec& spec) {
    spec.validate();
    ComplexSpectrum out(width, height);
    std::vector<std::complex<double>> bx(static_cast<std::size_t>(width));
    std::vector<std::complex<double>> by(static_cast<std::size_t>(height));
    for (int kx = 0; kx < width; ++kx) bx[kx] = digital_transfer_factor(bin_omega(kx, width), spec);
    for (int ky = 0; ky < height; ++ky) by[ky] = digital_transfer_factor(bin_omega(ky, height), spec);
    for (int ky = 0; ky < height; ++ky) {
        const double w2 = std::abs(bin_omega(ky, height));
        for (int kx = 0; kx < width; ++kx) {
            const double w1 = std::abs(bin_omega(kx, width));
            out.at(kx, ky) = (w1 >= w2) ? bx[kx] : by[ky];
        }
    }
    return out;
}

/// Frequency response of the n-th order directional Hilbert transform,
/// [-i*cos(atan2(w2,w1) - pi*l/L)]^n; the origin maps to 0 by convention.
inline std::complex<double> directional_response(double omega1, double omega2, int l,
                                                 const DirectionalSpec& dspec) {
    dspec.validate();
    if (l < 0 || l >= dspec.num_directions)
        throw std::invalid_argument("directional_response: direction index out of range");
    if (omega1 == 0.0 && omega2 == 0.0) return {0.0, 0.0};
    const double c = std::cos(std::atan2(omega2, omega1) - dspec.angle(l));
    return detail::minus_i_pow(dspec.order) * detail::pow_int(c, dspec.order);
}

/// L directional bandpass spectra, one per direction, at a fixed grid size.
struct FilterBank {
    int width = 0;
    int height = 0;
    BandpassSpec band;
    DirectionalSpec dirs;
    std::vector<ComplexSpectrum> spectra;

    int num_directions() const { return dirs.num_directions; }
};

/// Composite filter bank: plane l holds h_l^n(w) * g^gamma(w) per bin, with
/// the origin bin zero in every plane.
inline FilterBank build_filter_bank(int width, int height, const BandpassSpec& spec,
                                    const DirectionalSpec& dspec) {
    spec.validate();
    dspec.validate();
    FilterBank bank;
    bank.width = width;
    bank.height = height;
    bank.band = spec;
    bank.dirs = dspec;

    const ComplexSpectrum g = butterworth_2d_spectrum(width, height, spec);
    std::vector<double> angle(detail::grid_len(width, height), 0.0);
    for (int ky = 0; ky < height; ++ky) {
        const double w2 = bin_omega(ky, height);
        for (int kx = 0; kx < width; ++kx) {
            const double w1 = bin_omega(kx, width);
            angle[static_cast<std::size_t>(ky) * width + kx] = std::atan2(w2, w1);
        }
    }

    bank.spectra.reserve(dspec.num_directions);
    const std::complex<double> unit = detail::minus_i_pow(dspec.order);
    for (int l = 0; l < dspec.num_directions; ++l) {
        ComplexSpectrum plane(width, height);
        const double theta_l = dspec.angle(l);
        for (std::size_t i = 0; i < plane.size(); ++i) {
            const double c = std::cos(angle[i] - theta_l);
            plane.data[i] = unit * detail::pow_int(c, dspec.order) * g.data[i];
        }
        plane.at(0, 0) = {0.0, 0.0};
        bank.spectra.push_back(std::move(plane));
    }
    return bank;
}

} // namespace fdb
