#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bbmlab {

/// Periodic domain [0,1), identified with the unit circle.
struct Circle {};

/// Truncated line [left, right], endpoints included.
struct Line {
    double left;
    double right;
};

using DomainKind = std::variant<Circle, Line>;

/// Uniformly sampled 1-D domain. Immutable after construction.
class Grid {
public:
    Grid(DomainKind kind, std::size_t n_points)
        : kind_(kind), n_(n_points) {
        if (n_ < 8) throw std::invalid_argument("Grid: n_points must be >= 8");
        if (is_circle()) {
            if (n_ % 2 != 0)
                throw std::invalid_argument("Grid: Circle requires even n_points");
            spacing_ = 1.0 / static_cast<double>(n_);
            left_ = 0.0;
        } else {
            const auto& l = std::get<Line>(kind_);
            if (!(l.left < l.right))
                throw std::invalid_argument("Grid: Line requires left < right");
            spacing_ = (l.right - l.left) / static_cast<double>(n_ - 1);
            left_ = l.left;
        }
    }

    bool is_circle() const { return std::holds_alternative<Circle>(kind_); }
    bool is_line() const { return !is_circle(); }
    std::size_t n_points() const { return n_; }
    double spacing() const { return spacing_; }
    double left() const { return left_; }
    double right() const {
        return is_circle() ? 1.0 : std::get<Line>(kind_).right;
    }
    double point(std::size_t i) const { return left_ + spacing_ * static_cast<double>(i); }

    /// Nearest sample index; periodic wrap on the circle.
    std::size_t index_of(double x) const {
        if (is_circle()) {
            double y = x - std::floor(x);
            auto i = static_cast<long>(std::llround(y / spacing_));
            return static_cast<std::size_t>(i % static_cast<long>(n_));
        }
        auto i = static_cast<long>(std::llround((x - left_) / spacing_));
        i = std::clamp(i, 0L, static_cast<long>(n_) - 1L);
        return static_cast<std::size_t>(i);
    }

    bool operator==(const Grid& o) const {
        return n_ == o.n_ && is_circle() == o.is_circle() &&
               left_ == o.left_ && spacing_ == o.spacing_;
    }

private:
    DomainKind kind_;
    std::size_t n_;
    double spacing_;
    double left_;
};

inline Grid make_grid(DomainKind kind, std::size_t n_points) { return Grid(kind, n_points); }

/// Real-valued samples on a Grid.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.n_points())
            throw std::invalid_argument("GridFunction: length mismatch");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("GridFunction: non-finite value");
    }

    template <typename F>
    static GridFunction sample(const Grid& g, F&& f) {
        std::vector<double> v(g.n_points());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.point(i));
        return GridFunction(g, std::move(v));
    }

    static GridFunction zero(const Grid& g) {
        return GridFunction(g, std::vector<double>(g.n_points(), 0.0));
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    GridFunction map(auto&& f) const {
        std::vector<double> v(values_);
        for (double& x : v) x = f(x);
        return GridFunction(grid_, std::move(v));
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("grid mismatch");
}

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return GridFunction(a.grid(), std::move(v));
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return GridFunction(a.grid(), std::move(v));
}

inline GridFunction operator*(double c, const GridFunction& a) {
    std::vector<double> v(a.values());
    for (double& x : v) x *= c;
    return GridFunction(a.grid(), std::move(v));
}

inline GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
    return GridFunction(a.grid(), std::move(v));
}

/// Quadrature of (int |f|^p)^{1/p}; exact max for p = infinity.
/// Periodic rectangle rule on the circle, trapezoid on the line.
inline double lp_norm(const GridFunction& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const auto& v = f.values();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    const double h = f.grid().spacing();
    double s = 0.0;
    if (f.grid().is_circle()) {
        for (double x : v) s += std::pow(std::abs(x), p);
        s *= h;
    } else {
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            s += 0.5 * h * (std::pow(std::abs(v[i]), p) + std::pow(std::abs(v[i + 1]), p));
    }
    return std::pow(s, 1.0 / p);
}

namespace detail {

// j-th centered divided difference, wrapping on the circle, one-sided
// index clamp avoided on the line by shrinking the range.
inline std::vector<double> centered_difference(const GridFunction& f, int order) {
    std::vector<double> cur(f.values());
    const double h = f.grid().spacing();
    const bool per = f.grid().is_circle();
    const long n = static_cast<long>(cur.size());
    for (int j = 0; j < order; ++j) {
        std::vector<double> next(cur.size(), 0.0);
        for (long i = 0; i < n; ++i) {
            long ip = i + 1, im = i - 1;
            if (per) {
                ip = (ip + n) % n;
                im = (im + n) % n;
            } else {
                if (ip >= n || im < 0) { next[i] = 0.0; continue; }
            }
            next[static_cast<std::size_t>(i)] =
                (cur[static_cast<std::size_t>(ip)] - cur[static_cast<std::size_t>(im)]) / (2.0 * h);
        }
        cur.swap(next);
    }
    return cur;
}

} // namespace detail

/// Finite-difference estimate of the C^{k,theta} norm: sum of sup norms of
/// the divided differences up to order k, plus the Holder quotient of the
/// k-th difference over grid offsets h = m*spacing, 1 <= m <= n/4.
/// A lower bound of the true norm; meant for relative comparisons.
inline double holder_norm_estimate(const GridFunction& f, int k, double theta) {
    if (k < 0 || theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("holder_norm_estimate: bad (k, theta)");
    const std::size_t n = f.size();
    if (n < 8 * static_cast<std::size_t>(k + 1))
        throw std::invalid_argument("holder_norm_estimate: grid too coarse for k");
    double total = 0.0;
    std::vector<double> dk;
    for (int j = 0; j <= k; ++j) {
        auto d = detail::centered_difference(f, j);
        double m = 0.0;
        // skip the j boundary cells on the line where the stencil is invalid
        const std::size_t skip = f.grid().is_circle() ? 0 : static_cast<std::size_t>(j);
        for (std::size_t i = skip; i + skip < d.size(); ++i) m = std::max(m, std::abs(d[i]));
        total += m;
        if (j == k) dk = std::move(d);
    }
    const double h = f.grid().spacing();
    const bool per = f.grid().is_circle();
    const long n_l = static_cast<long>(n);
    const long skip = per ? 0 : k;
    double quot = 0.0;
    for (long m = 1; m <= n_l / 4; ++m) {
        const double hm = std::pow(static_cast<double>(m) * h, theta);
        for (long i = skip; i < n_l - skip; ++i) {
            long ip = i + m;
            if (per) ip %= n_l;
            else if (ip >= n_l - skip) break;
            double q = std::abs(dk[static_cast<std::size_t>(ip)] - dk[static_cast<std::size_t>(i)]) / hm;
            quot = std::max(quot, q);
        }
    }
    return total + quot;
}

} // namespace bbmlab
