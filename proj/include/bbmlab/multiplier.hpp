#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "bbmlab/spectrum.hpp"

namespace bbmlab {

/// Fourier multiplier symbols used throughout: the Bessel potential J^s,
/// the nonlocal operator phi(D_x) = d_x (1-d_x^2)^{-1}, the unitary group
/// U(t), and d_x phi(D_x) = J^{-2} - I.
struct MultiplierSpec {
    struct Bessel { double s; };
    struct Phi {};
    struct Group { double t; };
    struct DxPhi {};

    std::variant<Bessel, Phi, Group, DxPhi> kind;

    static MultiplierSpec bessel(double s) { return {Bessel{s}}; }
    static MultiplierSpec phi() { return {Phi{}}; }
    static MultiplierSpec group(double t) { return {Group{t}}; }
    static MultiplierSpec dx_phi() { return {DxPhi{}}; }

    /// Symbol value at real frequency xi.
    std::complex<double> at(double xi) const {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const double w = 1.0 + two_pi * two_pi * xi * xi;
        if (const auto* b = std::get_if<Bessel>(&kind))
            return std::pow(w, b->s / 2.0);
        if (std::holds_alternative<Phi>(kind))
            return std::complex<double>(0.0, two_pi * xi / w);
        if (const auto* g = std::get_if<Group>(&kind))
            return std::exp(std::complex<double>(0.0, -two_pi * g->t * xi / w));
        return std::complex<double>(1.0 / w - 1.0, 0.0);
    }

    /// Odd symbols must vanish at the unpaired Nyquist mode to keep real
    /// data real; for the group this means phase 0 (multiplier 1) there.
    std::complex<double> at_nyquist(double xi) const {
        if (std::holds_alternative<Phi>(kind)) return 0.0;
        if (std::holds_alternative<Group>(kind)) return 1.0;
        return at(xi);
    }
};

inline Spectrum apply_multiplier(const Spectrum& sp, const MultiplierSpec& m) {
    Spectrum out = sp;
    for (long k = sp.k_min(); k <= sp.k_max(); ++k) {
        const auto mk = (k == sp.k_min()) ? m.at_nyquist(static_cast<double>(k))
                                          : m.at(static_cast<double>(k));
        out.set_coeff(k, mk * sp.coeff(k));
    }
    return out;
}

/// Spectral application on the circle; asserts the output is real up to
/// rounding before discarding the imaginary part.
inline GridFunction apply_multiplier(const GridFunction& f, const MultiplierSpec& m) {
    if (!f.grid().is_circle())
        throw std::invalid_argument("apply_multiplier: Line grids use line kernel ops");
    Spectrum sp = apply_multiplier(transform(f), m);
    std::vector<std::complex<double>> buf(sp.raw());
    detail::FftPlans::instance().backward(buf);
    double l2 = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) l2 += std::norm(std::complex<double>(f[i]));
    l2 = std::sqrt(l2 / static_cast<double>(buf.size()));
    std::vector<double> v(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        if (std::abs(buf[i].imag()) > 1e-12 * std::max(1.0, l2))
            throw std::runtime_error("apply_multiplier: Hermitian symmetry violated");
        v[i] = buf[i].real();
    }
    return GridFunction(f.grid(), std::move(v));
}

} // namespace bbmlab
