#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmlab/evolution.hpp"
#include "bbmlab/quadrature.hpp"

namespace bbmlab {

/// The fixed nonlinearity f(y) = y + y^2/2; global minimum f(-1) = -1/2.
inline double f_map(double y) { return y + 0.5 * y * y; }

/// The second preimage of the level f(c0): f(c0) = f(-2 - c0).
inline double conjugate_level(double c0) { return -2.0 - c0; }

enum class Verdict { ForcedConstant, HypothesisFails, Inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ForcedConstant: return "ForcedConstant";
        case Verdict::HypothesisFails: return "HypothesisFails";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// The endpoint decomposition of d_t u(b) - d_t u(a) into the three region
/// integrals, with verdicts carrying margins rather than bare booleans.
struct UCReport {
    double a = 0.0, b = 0.0;
    double A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0;
    double dt_at_a = 0.0, dt_at_b = 0.0;
    double identity_residual = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string which_theorem;
    double interval_deviation = 0.0;  // max deviation from the forced level on [a,b]
    double tolerance = 0.0;
    std::string detail;
};

namespace detail {

inline double hypothesis_tol(const GridFunction& u) {
    return 1e-9 * (1.0 + lp_norm(u, std::numeric_limits<double>::infinity()));
}

struct RegionSums {
    double s2, s3, s4;  // integrals of (d_x G(b-y) - d_x G(a-y)) w over the regions
};

/// Line regions (-inf,a], [a,b], [b,inf) via the same exponential cell rule
/// as the solver's convolution, so the decomposition telescopes exactly
/// against time_derivative for the piecewise-linear interpolant.
inline RegionSums region_sums_line(const GridFunction& w, std::size_t ia, std::size_t ib) {
    auto conv = exp_convolve_line(w);  // boundary warning irrelevant: regions truncate anyway
    auto p_at = [&](std::size_t i) { return conv.smooth_part[i] - conv.deriv_part[i]; };
    auto r_at = [&](std::size_t i) { return conv.smooth_part[i] + conv.deriv_part[i]; };
    const double decay = std::exp(-(w.grid().point(ib) - w.grid().point(ia)));
    RegionSums s;
    s.s2 = 0.5 * (1.0 - decay) * p_at(ia);
    s.s4 = 0.5 * (1.0 - decay) * r_at(ib);
    s.s3 = -0.5 * ((p_at(ib) - decay * p_at(ia)) + (r_at(ia) - decay * r_at(ib)));
    return s;
}

/// int_{y1}^{y2} d_x G(c - y) e^{2 pi i k y} dy on a segment where
/// c - y - m stays inside (0,1), using the closed form of the cosh kernel.
inline std::complex<double> green_deriv_segment(double c, int m, double y1, double y2, long k) {
    using cd = std::complex<double>;
    const double w0 = c - static_cast<double>(m) - 0.5;
    const cd i2pik(0.0, 2.0 * std::numbers::pi * static_cast<double>(k));
    auto seg = [&](double sgn) {  // int e^{(sgn + 2 pi i k) y} dy
        const cd e = i2pik + sgn;
        return (std::exp(e * y2) - std::exp(e * y1)) / e;
    };
    return (std::exp(w0) * seg(-1.0) - std::exp(-w0) * seg(1.0)) / (4.0 * std::sinh(0.5));
}

/// Periodic regions [0,a], [a,b], [b,1): per-mode closed-form segment
/// integrals against the trigonometric interpolant of w, consistent with the
/// spectral time derivative (both drop the unpaired Nyquist mode).
inline RegionSums region_sums_circle(const GridFunction& w, double a, double b) {
    Spectrum sp = transform(w);
    std::complex<double> s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (long k = sp.k_min() + 1; k <= sp.k_max(); ++k) {
        const auto c = sp.coeff(k);
        s2 += c * (green_deriv_segment(b, 0, 0.0, a, k) - green_deriv_segment(a, 0, 0.0, a, k));
        s3 += c * (green_deriv_segment(b, 0, a, b, k) - green_deriv_segment(a, -1, a, b, k));
        s4 += c * (green_deriv_segment(b, -1, b, 1.0, k) - green_deriv_segment(a, -1, b, 1.0, k));
    }
    return {s2.real(), s3.real(), s4.real()};
}

/// d_t u at an arbitrary periodic point by mode summation of the payload.
inline double dt_at_circle(const Spectrum& payload, double x) {
    std::complex<double> acc = 0.0;
    for (long k = payload.k_min() + 1; k <= payload.k_max(); ++k) {
        const auto phi = MultiplierSpec::phi().at(static_cast<double>(k));
        acc += phi * payload.coeff(k) *
               std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(k) * x));
    }
    return -acc.real();
}

/// Node indices covering [a,b] (no wrap: callers require a < b within one
/// period or window).
inline std::pair<std::size_t, std::size_t> interval_indices(const Grid& g, double a, double b) {
    std::size_t ia = g.n_points(), ib = 0;
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        const double x = g.point(i);
        if (x >= a - 1e-14 && x <= b + 1e-14) {
            ia = std::min(ia, i);
            ib = std::max(ib, i);
        }
    }
    if (ia > ib) throw std::invalid_argument("interval [a,b] contains no grid node");
    return {ia, ib};
}

} // namespace detail

/// Eq.-level two-level stationary data: c0 on [a,b], the conjugate level
/// outside. Constant payload makes it an exact fixed point of bbm_rhs.
inline GridFunction stationary_step(double c0, double a, double b, const Grid& grid) {
    if (!(a < b)) throw std::invalid_argument("stationary_step: need a < b");
    const double c0p = conjugate_level(c0);
    if (grid.is_circle()) {
        if (!(0.0 < a && b < 1.0))
            throw std::invalid_argument("stationary_step: need 0 < a < b < 1 on the circle");
        return GridFunction::sample(grid, [&](double x) { return (x >= a && x <= b) ? c0 : c0p; });
    }
    if (c0 != -2.0)
        throw std::invalid_argument(
            "stationary_step: on the line only c0 = -2 decays (conjugate level 0)");
    if (!(grid.left() < a && b < grid.right()))
        throw std::invalid_argument("stationary_step: [a,b] must lie inside the window");
    return GridFunction::sample(grid, [&](double x) { return (x >= a && x <= b) ? -2.0 : 0.0; });
}

/// A1 + A2 + A3 + A4 decomposition with payload (u+1)^2/2 (the constant-shift
/// normalization of u + u^2/2), with the forced-level verdict of the
/// "u = -1 on an interval" unique-continuation theorem.
inline UCReport a_decomposition(const GridFunction& u, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("a_decomposition: need a < b");
    UCReport rep;
    rep.which_theorem = u.grid().is_circle() ? "THAP2" : "THA2";
    GridFunction w = u.map([](double x) { return 0.5 * (x + 1.0) * (x + 1.0); });

    if (u.grid().is_circle()) {
        if (!(0.0 <= a && b < 1.0))
            throw std::invalid_argument("a_decomposition: need 0 <= a < b < 1 on the circle");
        rep.a = a;
        rep.b = b;
        auto sums = detail::region_sums_circle(w, a, b);
        rep.A2 = sums.s2;
        rep.A3 = sums.s3;
        rep.A4 = sums.s4;
        Spectrum payload = transform(u.map([](double x) { return x + 0.5 * x * x; }));
        rep.dt_at_a = detail::dt_at_circle(payload, a);
        rep.dt_at_b = detail::dt_at_circle(payload, b);
    } else {
        if (!(u.grid().left() <= a && b <= u.grid().right()))
            throw std::invalid_argument("a_decomposition: [a,b] outside the line window");
        const std::size_t ia = u.grid().index_of(a), ib = u.grid().index_of(b);
        if (ia >= ib) throw std::invalid_argument("a_decomposition: a and b snap to the same node");
        rep.a = u.grid().point(ia);
        rep.b = u.grid().point(ib);
        auto sums = detail::region_sums_line(w, ia, ib);
        rep.A2 = sums.s2;
        rep.A3 = sums.s3;
        rep.A4 = sums.s4;
        GridFunction dt = time_derivative(u);
        rep.dt_at_a = dt[ia];
        rep.dt_at_b = dt[ib];
    }
    rep.A1 = rep.dt_at_b - rep.dt_at_a;
    rep.identity_residual = rep.A1 + rep.A2 + rep.A3 + rep.A4;

    rep.tolerance = detail::hypothesis_tol(u);
    auto [ia, ib] = detail::interval_indices(u.grid(), rep.a, rep.b);
    double dev = 0.0;
    for (std::size_t i = ia; i <= ib; ++i) dev = std::max(dev, std::abs(u[i] + 1.0));
    rep.interval_deviation = dev;
    if (dev > rep.tolerance) {
        rep.verdict = Verdict::Inconclusive;
        rep.detail = "u deviates from -1 on [a,b]; hypothesis (i) not met";
    } else if (rep.A1 < -rep.tolerance) {
        rep.verdict = Verdict::HypothesisFails;
        rep.detail = "endpoint inequality d_t u(b) >= d_t u(a) violated; margin " +
                     std::to_string(rep.A1);
    } else {
        rep.verdict = Verdict::ForcedConstant;
        rep.detail = "hypotheses hold; A2 + A4 = " + std::to_string(rep.A2 + rep.A4) +
                     " forces u = -1 globally";
    }
    return rep;
}

/// Q(u0) = d_t u(b,0) - d_t u(a,0) with the level-shifted payload
/// f(u0) - f(c0); the shift is checked to leave Q unchanged.
inline double q_functional(const GridFunction& u0, double a, double b, double c0) {
    if (!u0.grid().is_circle())
        throw std::invalid_argument("q_functional: Circle grids only");
    if (!(0.0 <= a && a < b && b < 1.0))
        throw std::invalid_argument("q_functional: need 0 <= a < b < 1");
    const double fc0 = f_map(c0);
    auto q_of = [&](const GridFunction& payload) {
        Spectrum sp = transform(payload);
        std::complex<double> acc = 0.0;
        for (long k = sp.k_min() + 1; k <= sp.k_max(); ++k) {
            const auto phi = MultiplierSpec::phi().at(static_cast<double>(k));
            const std::complex<double> eb =
                std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * k * b));
            const std::complex<double> ea =
                std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * k * a));
            acc += phi * sp.coeff(k) * (eb - ea);
        }
        return -acc.real();
    };
    const double q_shifted = q_of(u0.map([&](double y) { return f_map(y) - fc0; }));
    const double q_plain = q_of(u0.map([](double y) { return f_map(y); }));
    const double scale = 1.0 + std::abs(fc0) + lp_norm(u0, std::numeric_limits<double>::infinity());
    if (std::abs(q_shifted - q_plain) > 1e-12 * scale)
        throw std::runtime_error("q_functional: level shift changed Q beyond rounding");
    return q_shifted;
}

namespace detail {

/// C-infinity bump on (lo,hi), peak value 1 at the midpoint.
inline double bump(double x, double lo, double hi) {
    const double xi = (2.0 * x - lo - hi) / (hi - lo);
    if (std::abs(xi) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - xi * xi));
}

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double s0 = std::exp(-1.0 / t), s1 = std::exp(-1.0 / (1.0 - t));
    return s0 / (s0 + s1);
}

} // namespace detail

/// Periodic data v0 with v0 = c0 on [a,b] and Q(v0) = 0, found by bisecting
/// between the two signed bump perturbations that bracket Q.
struct Thap3Construction {
    GridFunction v0;
    double c0, a, b;
    double lambda0;
    double q_value;   // Q at the returned data
    double q_v1, q_v2;  // the bracketing endpoint values, q_v1 > 0 > q_v2
};

inline Thap3Construction construct_thap3(double c0, double a, double b, const Grid& grid) {
    if (c0 == -1.0)
        throw std::invalid_argument("construct_thap3: c0 = -1 is excluded (f has its minimum there)");
    if (!grid.is_circle()) throw std::invalid_argument("construct_thap3: Circle grids only");
    if (!(0.0 < a && a < b && b < 1.0))
        throw std::invalid_argument("construct_thap3: need 0 < a < b < 1");

    // steer half-way toward -1 inside (0,a) to lower f, and away from -1
    // inside (b,1) to raise it
    const double s1 = 0.5 * (-1.0 - c0);
    const double s2 = -s1;
    auto v_of = [&](double lambda) {
        return GridFunction::sample(grid, [&](double x) {
            return c0 + lambda * s1 * detail::bump(x, 0.0, a) +
                   (1.0 - lambda) * s2 * detail::bump(x, b, 1.0);
        });
    };
    const GridFunction v1 = v_of(1.0), v2 = v_of(0.0);
    const double fc0 = f_map(c0);
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        const double x = grid.point(i);
        if (detail::bump(x, 0.0, a) > 1e-3 && !(f_map(v1[i]) < fc0))
            throw std::runtime_error("construct_thap3: sign check failed, f(v1) not below f(c0) at x = " +
                                     std::to_string(x));
        if (detail::bump(x, b, 1.0) > 1e-3 && !(f_map(v2[i]) > fc0))
            throw std::runtime_error("construct_thap3: sign check failed, f(v2) not above f(c0) at x = " +
                                     std::to_string(x));
    }
    const double q1 = q_functional(v1, a, b, c0);
    const double q2 = q_functional(v2, a, b, c0);
    if (!(q1 > 0.0 && q2 < 0.0)) {
        std::ostringstream os;
        os << "construct_thap3: bracket Q(v1) > 0 > Q(v2) failed: Q(v1) = " << q1
           << ", Q(v2) = " << q2;
        throw std::runtime_error(os.str());
    }
    double lo = 0.0, hi = 1.0, lam = 0.5, q = 0.0;
    for (int it = 0; it < 200; ++it) {
        lam = 0.5 * (lo + hi);
        q = q_functional(v_of(lam), a, b, c0);
        if (std::abs(q) <= 1e-10) break;
        (q > 0.0 ? hi : lo) = lam;
    }
    if (std::abs(q) > 1e-10)
        throw std::runtime_error("construct_thap3: bisection stalled with |Q| = " + std::to_string(q));
    return Thap3Construction{v_of(lam), c0, a, b, lam, q, q1, q2};
}

/// Compactly supported line data, u0 = c0 on [0,b], realizing the weighted
/// tail integrals alpha = f(c0) and beta = e^{-b} f(c0) so that d_t u
/// vanishes identically on [0,b].
struct Tha3Construction {
    GridFunction u0;
    double c0, a, b;
    double alpha_target, beta_target;
    double alpha_achieved, beta_achieved;
    double residual_on_interval;  // analytic max |d_t u| on [0,b] from the achieved integrals
    double dt_max_on_interval;    // independent adaptive-quadrature evaluation
    double plateau_level;         // the solved tail plateau value
};

namespace detail {

/// Tail profile at distance z >= 0 from an interval endpoint: transition
/// from c0 to the plateau level s over delta, hold for the plateau length,
/// then descend to 0 over another delta.
inline double tail_profile(double z, double s, double c0, double delta, double plateau) {
    if (z <= delta) return c0 + (s - c0) * smooth_step(z / delta);
    if (z <= delta + plateau) return s;
    if (z <= 2.0 * delta + plateau) return s * (1.0 - smooth_step((z - delta - plateau) / delta));
    return 0.0;
}

} // namespace detail

inline Tha3Construction construct_tha3(double c0, double b, double M, const Grid& grid) {
    if (c0 == -1.0)
        throw std::invalid_argument(
            "construct_tha3: c0 = -1 is excluded; the target alpha = -1/2 is the open "
            "infimum of the attainable range");
    if (!(b > 0.0)) throw std::invalid_argument("construct_tha3: need b > 0");
    if (!(std::exp(-M) < 1e-10))
        throw std::invalid_argument("construct_tha3: M too small, need e^{-M} < 1e-10");
    if (!grid.is_line()) throw std::invalid_argument("construct_tha3: Line grids only");

    const double delta = 3.0;
    const double support = 2.0 * delta + M;
    if (!(grid.left() <= -support && grid.right() >= b + support))
        throw std::invalid_argument("construct_tha3: window must cover [-" + std::to_string(support) +
                                    ", b + " + std::to_string(support) + "]");

    const double fc0 = f_map(c0);
    // alpha(s) = int_0^inf e^{-z} f(profile(z; s)) dz; the beta equation
    // reduces to the same integral after factoring e^{-b}
    auto weighted = [&](double s) {
        auto fz = [&](double z) {
            return std::exp(-z) * f_map(detail::tail_profile(z, s, c0, delta, M));
        };
        return integrate(fz, 0.0, delta, 1e-13) +
               f_map(s) * (std::exp(-delta) - std::exp(-delta - M)) +
               integrate(fz, delta + M, 2.0 * delta + M, 1e-13);
    };
    const double s_hi = std::max(8.0, 2.0 * std::abs(c0) + 8.0);
    double s_star;
    try {
        // at s = -1 the whole tail sits at or below the level f(c0), so the
        // scan from -1 upward always brackets the target for c0 != -1
        s_star = bisect_on_bracket([&](double s) { return weighted(s) - fc0; }, -1.0, s_hi, 256, 1e-13);
    } catch (const std::exception& e) {
        throw std::runtime_error("construct_tha3: root find failed over s in [-1, " +
                                 std::to_string(s_hi) + "]: " + e.what());
    }

    auto profile = [=](double x) {
        if (x < 0.0) return detail::tail_profile(-x, s_star, c0, delta, M);
        if (x <= b) return c0;
        return detail::tail_profile(x - b, s_star, c0, delta, M);
    };

    Tha3Construction out{GridFunction::sample(grid, profile),
                         c0,
                         0.0,
                         b,
                         fc0,
                         std::exp(-b) * fc0,
                         0.0,
                         0.0,
                         0.0,
                         0.0,
                         s_star};
    const double tail_integral = weighted(s_star);
    out.alpha_achieved = tail_integral;
    out.beta_achieved = std::exp(-b) * tail_integral;
    if (std::abs(out.alpha_achieved - out.alpha_target) > 1e-10)
        throw std::runtime_error("construct_tha3: alpha root find did not reach tolerance");

    // max over [0,b] of the closed-form residual with the achieved integrals
    const double da = out.alpha_achieved - fc0;
    const double db = std::exp(-b) * fc0 - out.beta_achieved;
    for (int i = 0; i <= 200; ++i) {
        const double x = b * static_cast<double>(i) / 200.0;
        out.residual_on_interval = std::max(
            out.residual_on_interval, std::abs(0.5 * (std::exp(-x) * da + std::exp(x) * db)));
    }

    // independent check: d_t u(x,0) = (P(x) - R(x))/2 by adaptive quadrature
    // of the analytic profile
    const double lo = -support, hi = b + support;
    for (int i = 0; i <= 20; ++i) {
        const double x = b * static_cast<double>(i) / 20.0;
        const double p = integrate([&](double y) { return std::exp(y - x) * f_map(profile(y)); },
                                   lo, x, 5e-13);
        const double r = integrate([&](double y) { return std::exp(x - y) * f_map(profile(y)); },
                                   x, hi, 5e-13);
        out.dt_max_on_interval = std::max(out.dt_max_on_interval, std::abs(0.5 * (p - r)));
    }
    return out;
}

enum class Tha4Branch { Cond1, Cond2 };

/// General-level verdict: u = c0 at the endpoints, f(u) - f(c0) of one sign
/// inside [a,b] and the other outside, plus the endpoint derivative
/// inequality, force u = c0. Checks the selected branch with margins.
inline UCReport uc_verdict_tha4(const GridFunction& u, double a, double b, double c0,
                                Tha4Branch branch) {
    if (!(a < b)) throw std::invalid_argument("uc_verdict_tha4: need a < b");
    const double fc0 = f_map(c0);
    GridFunction g = u.map([&](double y) { return f_map(y) - fc0; });

    UCReport rep;
    rep.which_theorem = u.grid().is_circle() ? "THAP4" : "THA4";
    rep.tolerance = detail::hypothesis_tol(u) * (1.0 + std::abs(c0));
    std::size_t ia, ib;
    if (u.grid().is_circle()) {
        if (!(0.0 <= a && b < 1.0))
            throw std::invalid_argument("uc_verdict_tha4: need 0 <= a < b < 1 on the circle");
        rep.a = a;
        rep.b = b;
        auto sums = detail::region_sums_circle(g, a, b);
        rep.A2 = sums.s2;
        rep.A3 = sums.s3;
        rep.A4 = sums.s4;
        Spectrum payload = transform(u.map([](double y) { return f_map(y); }));
        rep.dt_at_a = detail::dt_at_circle(payload, a);
        rep.dt_at_b = detail::dt_at_circle(payload, b);
        std::tie(ia, ib) = detail::interval_indices(u.grid(), a, b);
    } else {
        ia = u.grid().index_of(a);
        ib = u.grid().index_of(b);
        if (ia >= ib) throw std::invalid_argument("uc_verdict_tha4: a and b snap to the same node");
        rep.a = u.grid().point(ia);
        rep.b = u.grid().point(ib);
        auto sums = detail::region_sums_line(g, ia, ib);
        rep.A2 = sums.s2;
        rep.A3 = sums.s3;
        rep.A4 = sums.s4;
        GridFunction dt = time_derivative(u);
        rep.dt_at_a = dt[ia];
        rep.dt_at_b = dt[ib];
    }
    rep.A1 = rep.dt_at_b - rep.dt_at_a;
    rep.identity_residual = rep.A1 + rep.A2 + rep.A3 + rep.A4;

    double dev = 0.0;
    for (std::size_t i = ia; i <= ib; ++i) dev = std::max(dev, std::abs(u[i] - c0));
    rep.interval_deviation = dev;

    const double sgn = branch == Tha4Branch::Cond1 ? 1.0 : -1.0;
    if (std::abs(u[ia] - c0) > rep.tolerance || std::abs(u[ib] - c0) > rep.tolerance) {
        rep.verdict = Verdict::Inconclusive;
        rep.detail = "endpoint condition u(a) = u(b) = c0 not met";
        return rep;
    }
    for (std::size_t i = ia; i <= ib; ++i) {
        if (sgn * g[i] > rep.tolerance) {
            rep.verdict = Verdict::HypothesisFails;
            rep.detail = "interval sign condition on f(u) - f(c0) violated at x = " +
                         std::to_string(u.grid().point(i));
            return rep;
        }
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i >= ia && i <= ib) continue;
        if (sgn * g[i] < -rep.tolerance) {
            rep.verdict = Verdict::HypothesisFails;
            rep.detail = "exterior sign condition on f(u) - f(c0) violated at x = " +
                         std::to_string(u.grid().point(i));
            return rep;
        }
    }
    if (sgn * rep.A1 < -rep.tolerance) {
        rep.verdict = Verdict::HypothesisFails;
        rep.detail = "endpoint derivative inequality violated; margin " + std::to_string(sgn * rep.A1);
        return rep;
    }
    rep.verdict = Verdict::ForcedConstant;
    rep.detail = "hypotheses hold; forcing integrals vanish only at u = c0";
    return rep;
}

/// Camassa-Holm endpoint check: u = 0 on [a,b] makes the transport term drop
/// out there, and the nonnegative payload u^2 + (d_x u)^2/2 forces d_t u
/// strictly decreasing across [a,b] unless u vanishes identically.
inline UCReport ch_uc_check(const GridFunction& u, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("ch_uc_check: need a < b");
    if (!u.grid().is_line()) throw std::invalid_argument("ch_uc_check: Line grids only");
    const std::size_t ia = u.grid().index_of(a), ib = u.grid().index_of(b);
    if (ia >= ib) throw std::invalid_argument("ch_uc_check: a and b snap to the same node");

    UCReport rep;
    rep.which_theorem = "IVPCH2";
    rep.a = u.grid().point(ia);
    rep.b = u.grid().point(ib);
    rep.tolerance = detail::hypothesis_tol(u);

    GridFunction ux = detail::derivative(u);
    GridFunction payload = u * u + 0.5 * (ux * ux);
    auto sums = detail::region_sums_line(payload, ia, ib);
    rep.A2 = sums.s2;
    rep.A3 = sums.s3;
    rep.A4 = sums.s4;
    GridFunction dt = ch_rhs(u);
    rep.dt_at_a = dt[ia];
    rep.dt_at_b = dt[ib];
    rep.A1 = rep.dt_at_b - rep.dt_at_a;
    rep.identity_residual = rep.A1 + rep.A2 + rep.A3 + rep.A4;

    double dev = 0.0;
    for (std::size_t i = ia; i <= ib; ++i) dev = std::max(dev, std::abs(u[i]));
    rep.interval_deviation = dev;
    if (dev > rep.tolerance) {
        rep.verdict = Verdict::Inconclusive;
        rep.detail = "u does not vanish on [a,b]; hypothesis not met";
        return rep;
    }
    bool strictly_decreasing = true;
    for (std::size_t i = ia; i < ib; ++i) {
        if (!(dt[i + 1] - dt[i] < -rep.tolerance)) {
            strictly_decreasing = false;
            break;
        }
    }
    if (strictly_decreasing) {
        rep.verdict = Verdict::HypothesisFails;
        rep.detail = "d_t u is strictly decreasing on [a,b] (nonnegative payload off the "
                     "interval); the non-monotonicity hypothesis fails";
    } else {
        rep.verdict = Verdict::ForcedConstant;
        rep.detail = "hypotheses hold; the nonnegative payload must vanish, so u = 0";
    }
    return rep;
}

} // namespace bbmlab
