#pragma once

#include <cstdint>
#include <numbers>

#include "bbmlab/spectrum.hpp"

namespace bbmlab {

/// Counter-based generator: value(seed, counter) = splitmix64 finalizer of
/// seed ^ (counter * golden gamma). Stateless, so any implementation of the
/// same formula reproduces identical data from the seed specification.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed ^ (counter * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform in [0,1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

/// Random-phase power-law data: coeff(k) = amplitude |k|^{-slope} e^{i theta_k}
/// for 1 <= k <= k_max (conjugate-symmetric, zero mean). The law is fixed by
/// (seed, slope, amplitude, k_max) independently of the grid, so refinement
/// sweeps see the same function.
struct SpectralLaw {
    double slope;
    double amplitude = 1.0;
    long k_max = 1 << 20;  // effectively "all modes the grid can hold"
    std::uint64_t seed = 0;

    GridFunction realize(const Grid& grid) const {
        const long n = static_cast<long>(grid.n_points());
        Spectrum sp(grid, std::vector<std::complex<double>>(grid.n_points(), 0.0));
        const long top = std::min(k_max, n / 2 - 1);
        for (long k = 1; k <= top; ++k) {
            const double theta =
                2.0 * std::numbers::pi * counter_uniform(seed, static_cast<std::uint64_t>(k));
            const double mag = amplitude * std::pow(static_cast<double>(k), -slope);
            const std::complex<double> c = std::polar(mag, theta);
            sp.set_coeff(k, c);
            sp.set_coeff(-k, std::conj(c));
        }
        return inverse(sp);
    }
};

} // namespace bbmlab
