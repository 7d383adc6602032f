#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "bbmlab/grid.hpp"

namespace bbmlab {

namespace detail {

// One forward/backward FFTW plan pair per size, created once and reused.
// Plan creation is serialized (FFTW's planner is not thread safe); the
// new-array execute functions are.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void forward(std::vector<std::complex<double>>& inout) { run(inout, FFTW_FORWARD); }
    void backward(std::vector<std::complex<double>>& inout) { run(inout, FFTW_BACKWARD); }

private:
    struct Pair {
        fftw_plan fwd{nullptr};
        fftw_plan bwd{nullptr};
    };

    void run(std::vector<std::complex<double>>& inout, int sign) {
        const std::size_t n = inout.size();
        fftw_plan plan;
        {
            std::lock_guard lock(mu_);
            auto& p = plans_[n];
            if (!p.fwd) {
                std::vector<std::complex<double>> tmp(n);
                auto* buf = reinterpret_cast<fftw_complex*>(tmp.data());
                unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
                p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
                p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
            }
            plan = sign == FFTW_FORWARD ? p.fwd : p.bwd;
        }
        auto* buf = reinterpret_cast<fftw_complex*>(inout.data());
        fftw_execute_dft(plan, buf, buf);
    }

    std::mutex mu_;
    std::map<std::size_t, Pair> plans_;
};

} // namespace detail

/// Fourier coefficients of a periodic GridFunction, normalized as period-1
/// coefficients: coeff(k) ~ int_0^1 f(x) e^{-2 pi i k x} dx, k in [-n/2, n/2).
class Spectrum {
public:
    Spectrum(Grid grid, std::vector<std::complex<double>> coeffs)
        : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
        if (!grid_.is_circle())
            throw std::invalid_argument("Spectrum: Circle grids only");
        if (coeffs_.size() != grid_.n_points())
            throw std::invalid_argument("Spectrum: length mismatch");
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return coeffs_.size(); }

    /// Coefficient at integer frequency k in [-n/2, n/2). Stored in FFT
    /// order internally.
    std::complex<double> coeff(long k) const {
        return coeffs_[slot(k)];
    }
    void set_coeff(long k, std::complex<double> c) { coeffs_[slot(k)] = c; }

    long k_min() const { return -static_cast<long>(size()) / 2; }
    long k_max() const { return static_cast<long>(size()) / 2 - 1; }

    const std::vector<std::complex<double>>& raw() const { return coeffs_; }
    std::vector<std::complex<double>>& raw() { return coeffs_; }

private:
    std::size_t slot(long k) const {
        const long n = static_cast<long>(size());
        if (k < -n / 2 || k >= n / 2)
            throw std::out_of_range("Spectrum: frequency out of range");
        return static_cast<std::size_t>((k + n) % n);
    }

    Grid grid_;
    std::vector<std::complex<double>> coeffs_;
};

/// Forward transform. Circle grids only.
inline Spectrum transform(const GridFunction& f) {
    if (!f.grid().is_circle())
        throw std::invalid_argument("transform: unsupported on Line grids, use line-kernel operations");
    const std::size_t n = f.size();
    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = f[i];
    detail::FftPlans::instance().forward(buf);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& c : buf) c *= inv_n;
    return Spectrum(f.grid(), std::move(buf));
}

/// Inverse transform back to real samples. The imaginary residue must be at
/// rounding level relative to the L2 size of the data.
inline GridFunction inverse(const Spectrum& s) {
    std::vector<std::complex<double>> buf(s.raw());
    detail::FftPlans::instance().backward(buf);
    std::vector<double> v(buf.size());
    double imag_max = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        v[i] = buf[i].real();
        imag_max = std::max(imag_max, std::abs(buf[i].imag()));
        scale = std::max(scale, std::abs(buf[i].real()));
    }
    if (imag_max > 1e-10 * std::max(1.0, scale))
        throw std::runtime_error("inverse: non-negligible imaginary residue");
    return GridFunction(s.grid(), std::move(v));
}

/// ( sum_k (1+4 pi^2 k^2)^s |coeff(k)|^2 )^{1/2}.
inline double sobolev_norm(const Spectrum& sp, double s) {
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    double acc = 0.0;
    for (long k = sp.k_min(); k <= sp.k_max(); ++k) {
        const double kk = static_cast<double>(k);
        acc += std::pow(1.0 + four_pi2 * kk * kk, s) * std::norm(sp.coeff(k));
    }
    return std::sqrt(acc);
}

inline double sobolev_norm(const GridFunction& f, double s) {
    return sobolev_norm(transform(f), s);
}

} // namespace bbmlab
