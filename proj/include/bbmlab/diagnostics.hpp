#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bbmlab/evolution.hpp"
#include "bbmlab/rng.hpp"

namespace bbmlab {

/// Max relative drift of each conserved functional over a trajectory.
struct DriftReport {
    double I1;
    double I2;
    double I3;
};

inline DriftReport drift_report(const Trajectory& traj) {
    if (traj.invariant_history.empty())
        throw std::invalid_argument("drift_report: empty invariant history");
    const auto& ref = traj.invariant_history.front();
    auto rel = [](double x, double x0) { return std::abs(x - x0) / std::max(1.0, std::abs(x0)); };
    DriftReport r{0.0, 0.0, 0.0};
    for (const auto& iv : traj.invariant_history) {
        r.I1 = std::max(r.I1, rel(iv.I1, ref.I1));
        r.I2 = std::max(r.I2, rel(iv.I2, ref.I2));
        r.I3 = std::max(r.I3, rel(iv.I3, ref.I3));
    }
    return r;
}

/// Least-squares fit of log|coeff| against log k over [k_min, k_max],
/// averaging the +/-k magnitudes; returns sigma with |coeff| ~ k^{-sigma}.
inline double spectral_slope(const Spectrum& sp, long k_min, long k_max) {
    if (k_min < 1 || k_max <= k_min || k_max > sp.k_max())
        throw std::invalid_argument("spectral_slope: bad band");
    std::vector<double> xs, ys;
    for (long k = k_min; k <= k_max; ++k) {
        const double mag = 0.5 * (std::abs(sp.coeff(k)) + std::abs(sp.coeff(-k)));
        if (mag <= 0.0) continue;
        xs.push_back(std::log(static_cast<double>(k)));
        ys.push_back(std::log(mag));
    }
    if (xs.size() < 2)
        throw std::invalid_argument("spectral_slope: degenerate band (too few nonzero coefficients)");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Measured vs predicted smoothing of u(t) - u0.
struct RegularityReport {
    double s_nominal = 0.0;
    double slope_u0 = 0.0;
    double slope_diff = 0.0;
    double gain_measured = 0.0;
    double gain_predicted = 0.0;
    bool zero_difference = false;
    std::vector<std::pair<std::size_t, double>> refinement_ratios;  // (N, norm) pairs
};

/// Smoothness index gained by u(t)-u0: s+1/2 below the s=1/2 threshold,
/// one full derivative above it.
inline double predicted_gain(double s_nominal) {
    return std::min(s_nominal + 0.5, 1.0);
}

inline RegularityReport regularity_gain(const GridFunction& u0, const Trajectory& traj,
                                        double s_nominal, long k_min = 8, long k_max = 128) {
    if (!u0.grid().is_circle())
        throw std::invalid_argument("regularity_gain: Circle grids only");
    if (traj.times.size() < 2 || traj.times.back() <= 0.0)
        throw std::invalid_argument("regularity_gain: need a snapshot with t > 0");
    RegularityReport rep;
    rep.s_nominal = s_nominal;
    rep.gain_predicted = predicted_gain(s_nominal);
    GridFunction diff = traj.final_state() - u0;
    if (lp_norm(diff, 2.0) < 1e-14 * std::max(1.0, lp_norm(u0, 2.0))) {
        rep.zero_difference = true;
        return rep;
    }
    rep.slope_u0 = spectral_slope(transform(u0), k_min, k_max);
    rep.slope_diff = spectral_slope(transform(diff), k_min, k_max);
    rep.gain_measured = rep.slope_diff - rep.slope_u0;
    return rep;
}

/// Refinement sweep: evolve the same data law at several resolutions and
/// record sobolev_norm(u(t)-u0, s_eval). A stabilizing sequence (ratio near
/// 1 per doubling) indicates membership at s_eval.
inline std::vector<std::pair<std::size_t, double>> refinement_sweep(
    const SpectralLaw& law, const SolverConfig& cfg, double s_eval,
    const std::vector<std::size_t>& resolutions) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t n : resolutions) {
        Grid g(Circle{}, n);
        GridFunction u0 = law.realize(g);
        Trajectory traj = evolve(u0, cfg);
        out.emplace_back(n, sobolev_norm(traj.final_state() - u0, s_eval));
    }
    return out;
}

/// Grid locations where the local Holder quotient spikes.
struct SingularitySet {
    std::vector<double> points;
    int j = 0;
    double eta = 0.0;
};

/// Local detector: q(x_i) = max over offsets m h, m <= m_max, of
/// |D^j u(x_{i+m}) - D^j u(x_{i-m})| / (2 m h)^eta; flags points with
/// q > median(q) * threshold, one representative per contiguous cluster.
inline SingularitySet singularity_localize(const GridFunction& u, int j, double eta,
                                           double threshold = 20.0, int m_max = 4) {
    const long n = static_cast<long>(u.size());
    if (n < 8 * (j + 1))
        throw std::invalid_argument("singularity_localize: grid too coarse for j");
    auto dj = detail::centered_difference(u, j);
    const double h = u.grid().spacing();
    const bool per = u.grid().is_circle();
    const long guard = per ? 0 : j + m_max;
    std::vector<double> q(static_cast<std::size_t>(n), 0.0);
    for (long i = guard; i < n - guard; ++i) {
        double best = 0.0;
        for (int m = 1; m <= m_max; ++m) {
            long ip = i + m, im = i - m;
            if (per) {
                ip = (ip + n) % n;
                im = (im + n) % n;
            } else if (ip >= n || im < 0) {
                break;
            }
            const double quot = std::abs(dj[static_cast<std::size_t>(ip)] - dj[static_cast<std::size_t>(im)]) /
                                std::pow(2.0 * m * h, eta);
            best = std::max(best, quot);
        }
        q[static_cast<std::size_t>(i)] = best;
    }
    std::vector<double> sorted(q);
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double cut = sorted[sorted.size() / 2] * threshold;

    SingularitySet set;
    set.j = j;
    set.eta = eta;
    // cluster contiguous flagged indices, keep the peak of each cluster
    std::vector<bool> flag(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) flag[i] = q[i] > cut && q[i] > 0.0;
    std::vector<bool> seen(q.size(), false);
    for (long i = 0; i < n; ++i) {
        if (!flag[static_cast<std::size_t>(i)] || seen[static_cast<std::size_t>(i)]) continue;
        long lo = i, hi = i;
        if (per) {
            while (flag[static_cast<std::size_t>((lo - 1 + n) % n)] && (i - lo) < n) --lo;
            while (flag[static_cast<std::size_t>((hi + 1) % n)] && (hi - lo) < n) ++hi;
        } else {
            while (lo > 0 && flag[static_cast<std::size_t>(lo - 1)]) --lo;
            while (hi + 1 < n && flag[static_cast<std::size_t>(hi + 1)]) ++hi;
        }
        long peak = lo;
        for (long k = lo; k <= hi; ++k) {
            const long idx = per ? (k % n + n) % n : k;
            seen[static_cast<std::size_t>(idx)] = true;
            if (q[static_cast<std::size_t>(idx)] > q[static_cast<std::size_t>((peak % n + n) % n)]) peak = k;
        }
        const long idx = per ? (peak % n + n) % n : peak;
        set.points.push_back(u.grid().point(static_cast<std::size_t>(idx)));
    }
    std::sort(set.points.begin(), set.points.end());
    return set;
}

} // namespace bbmlab
