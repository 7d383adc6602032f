#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace bbmlab {

namespace detail {

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature on [a,b].
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Scan [lo,hi] for a sign change of g and bisect to the given tolerance on
/// the argument. Throws if no bracket is found.
template <typename G>
double bisect_on_bracket(G&& g, double lo, double hi, int scan_points = 64,
                         double tol = 1e-10, int max_iter = 200) {
    double prev_x = lo, prev_v = g(lo);
    double a = 0.0, b = 0.0, va = 0.0;
    bool found = false;
    if (prev_v == 0.0) return lo;
    for (int i = 1; i <= scan_points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / scan_points;
        const double v = g(x);
        if (v == 0.0) return x;
        if (std::signbit(v) != std::signbit(prev_v)) {
            a = prev_x;
            b = x;
            va = prev_v;
            found = true;
            break;
        }
        prev_x = x;
        prev_v = v;
    }
    if (!found) throw std::runtime_error("bisect_on_bracket: no sign change in scanned range");
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double vm = g(m);
        if (vm == 0.0) return m;
        if (std::signbit(vm) == std::signbit(va)) {
            a = m;
            va = vm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace bbmlab
