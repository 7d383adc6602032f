#pragma once

#include <numbers>
#include <stdexcept>

#include "bbmlab/multiplier.hpp"
#include "bbmlab/spectrum.hpp"

namespace bbmlab {

/// The three conserved functionals of the periodic flow:
/// I1 = int u, I2 = int ((d_x u)^2 + u^2), I3 = int (u^3 + 3 u^2).
struct InvariantTriple {
    double I1;
    double I2;
    double I3;
};

inline GridFunction spectral_derivative(const GridFunction& f) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Spectrum sp = transform(f);
    Spectrum out = sp;
    for (long k = sp.k_min(); k <= sp.k_max(); ++k) {
        if (k == sp.k_min()) {
            out.set_coeff(k, 0.0);  // unpaired Nyquist mode of the odd symbol
            continue;
        }
        out.set_coeff(k, std::complex<double>(0.0, two_pi * static_cast<double>(k)) * sp.coeff(k));
    }
    std::vector<std::complex<double>> buf(out.raw());
    detail::FftPlans::instance().backward(buf);
    std::vector<double> v(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) v[i] = buf[i].real();
    return GridFunction(f.grid(), std::move(v));
}

inline InvariantTriple invariants(const GridFunction& u) {
    if (!u.grid().is_circle())
        throw std::invalid_argument("invariants: periodic-only functionals");
    const double h = u.grid().spacing();
    GridFunction ux = spectral_derivative(u);
    double i1 = 0.0, i2 = 0.0, i3 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i], d = ux[i];
        i1 += v;
        i2 += d * d + v * v;
        i3 += v * v * v + 3.0 * v * v;
    }
    return {h * i1, h * i2, h * i3};
}

} // namespace bbmlab
