#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bbmlab/grid.hpp"
#include "bbmlab/quadrature.hpp"

namespace bbmlab {

/// Periodic Green's function of (1 - d_x^2) on the unit circle.
inline double periodic_green(double x) {
    const double z = x - std::floor(x);
    return std::cosh(z - 0.5) / (2.0 * std::sinh(0.5));
}

/// Its derivative; jumps by 1 across integers, value 0 assigned there
/// (the midpoint of the one-sided limits, matching the Fourier series).
inline double periodic_green_deriv(double x) {
    const double z = x - std::floor(x);
    if (z == 0.0) return 0.0;
    return std::sinh(z - 0.5) / (2.0 * std::sinh(0.5));
}

/// Bessel kernel G_s on the line, normalized so that int G_s = 1
/// (equivalently c_s = ((4 pi)^{s/2} Gamma(s/2))^{-1}). For s <= 1 the
/// kernel is unbounded at the origin and G_s(0) = +infinity.
inline double bessel_kernel_line(double s, double x) {
    if (s <= 0.0) throw std::invalid_argument("bessel_kernel_line: s must be > 0");
    const double pi = std::numbers::pi;
    if (x == 0.0 && s <= 1.0) return std::numeric_limits<double>::infinity();
    const double c_s = 1.0 / (std::tgamma(s / 2.0) * std::pow(4.0 * pi, s / 2.0));
    // substitution y = e^u: integrand exp(-pi x^2 e^{-u} - e^u/(4 pi) + u (s-1)/2)
    auto g = [&](double u) {
        const double e_u = std::exp(u);
        double expo = -e_u / (4.0 * pi) + 0.5 * (s - 1.0) * u;
        if (x != 0.0) expo -= pi * x * x * std::exp(-u);
        return expo < -700.0 ? 0.0 : std::exp(expo);
    };
    double u_lo;
    if (x != 0.0) {
        const double u0 = std::log(2.0 * pi * std::abs(x));
        u_lo = u0 - std::log(90.0 / std::abs(x)) - 8.0;
    } else {
        u_lo = -2.0 * 45.0 / (s - 1.0) - 10.0;
    }
    const double u_hi = 12.0 + std::max(0.0, 2.0 * std::log1p(s));
    const double mid = x != 0.0 ? std::log(2.0 * pi * std::max(std::abs(x), 1e-8)) : 0.5 * (u_lo + u_hi);
    double coarse = integrate(g, u_lo, std::min(mid, u_hi), 1e-10) +
                    integrate(g, std::min(mid, u_hi), u_hi, 1e-10);
    const double tol = std::max(1e-300, 1e-13 * std::abs(coarse));
    double val = integrate(g, u_lo, std::min(mid, u_hi), tol) +
                 integrate(g, std::min(mid, u_hi), u_hi, tol);
    return c_s * val;
}

/// Result of convolving Line data with e^{-|x|}/2 and its derivative.
struct LineKernelResult {
    GridFunction smooth_part;  // G_2 * f
    GridFunction deriv_part;   // d_x G_2 * f
    std::string warning;       // nonempty when boundary support is violated
};

/// One-pass exponential recurrences computing P(x) = int_{-inf}^x e^{y-x} f
/// and R(x) = int_x^{inf} e^{x-y} f with cell quadrature exact for the
/// piecewise-linear interpolant of f. O(N).
inline LineKernelResult exp_convolve_line(const GridFunction& f) {
    if (!f.grid().is_line())
        throw std::invalid_argument("exp_convolve_line: Line grids only");
    const auto& v = f.values();
    const std::size_t n = v.size();
    const double h = f.grid().spacing();

    std::string warning;
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::abs(x));
    if (std::abs(v.front()) > 1e-12 * sup || std::abs(v.back()) > 1e-12 * sup)
        warning = "boundary support violated: data not negligible at window edges";

    const double decay = std::exp(-h);
    const double e1 = -std::expm1(-h);            // 1 - e^{-h}
    const double w_near = (h - e1) / h;           // weight of the cell end nearest x
    const double w_far = e1 + e1 / h - 1.0;       // weight of the far end
    std::vector<double> p(n, 0.0), r(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        p[i] = decay * p[i - 1] + w_far * v[i - 1] + w_near * v[i];
    for (std::size_t i = n - 1; i-- > 0;)
        r[i] = decay * r[i + 1] + w_near * v[i] + w_far * v[i + 1];

    std::vector<double> sm(n), dv(n);
    for (std::size_t i = 0; i < n; ++i) {
        sm[i] = 0.5 * (p[i] + r[i]);
        dv[i] = 0.5 * (r[i] - p[i]);
    }
    return LineKernelResult{GridFunction(f.grid(), std::move(sm)),
                            GridFunction(f.grid(), std::move(dv)), std::move(warning)};
}

/// Direct O(N^2) quadrature of phi(D_x) f = (d_x G * f) on the circle.
/// Independent of the spectral path; the kernel's value jump at the node
/// y = x costs the trapezoid an h^2/12 * f'(x) term, which is corrected
/// with a centered-difference f'.
inline GridFunction phi_periodic_direct(const GridFunction& f) {
    if (!f.grid().is_circle())
        throw std::invalid_argument("phi_periodic_direct: Circle grids only");
    const auto& v = f.values();
    const std::size_t n = v.size();
    const double h = f.grid().spacing();
    std::vector<double> kernel(n);
    for (std::size_t d = 0; d < n; ++d)
        kernel[d] = periodic_green_deriv(static_cast<double>(d) * h);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += kernel[(i + n - j) % n] * v[j];
        const double fp = (v[(i + 1) % n] - v[(i + n - 1) % n]) / (2.0 * h);
        out[i] = h * acc + h * h / 12.0 * fp;
    }
    return GridFunction(f.grid(), std::move(out));
}

} // namespace bbmlab
