#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmlab/invariants.hpp"
#include "bbmlab/kernels.hpp"
#include "bbmlab/multiplier.hpp"

namespace bbmlab {

enum class Method { PicardFixedPoint, RungeKutta4, ExponentialDuhamel };
enum class Equation { BBM, CamassaHolm };

struct SolverConfig {
    Method method = Method::RungeKutta4;
    Equation equation = Equation::BBM;
    double dt = 1e-3;
    double t_final = 1.0;
    double picard_tol = 1e-12;
    int picard_max_iter = 100;
    int snapshot_stride = 1;

    void validate() const {
        if (!(dt > 0.0) || !(dt <= t_final))
            throw std::invalid_argument("SolverConfig: need 0 < dt <= t_final");
        if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol > 0");
        if (snapshot_stride < 1) throw std::invalid_argument("SolverConfig: snapshot_stride >= 1");
    }
};

/// Time-ordered snapshots plus invariant histories (Circle only).
struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> states;
    std::vector<InvariantTriple> invariant_history;
    std::vector<std::string> warnings;
    SolverConfig config;

    const GridFunction& initial() const { return states.front(); }
    const GridFunction& final_state() const { return states.back(); }
};

struct SystemCoefficients {
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
};

struct SystemTrajectory {
    std::vector<double> times;
    std::vector<GridFunction> u_states;
    std::vector<GridFunction> v_states;
};

namespace detail {

/// phi(D_x) h: spectral on the circle, exponential recurrence on the line.
inline GridFunction apply_phi(const GridFunction& h, std::string* warning = nullptr) {
    if (h.grid().is_circle()) return apply_multiplier(h, MultiplierSpec::phi());
    auto res = exp_convolve_line(h);
    if (warning && !res.warning.empty() && warning->empty()) *warning = res.warning;
    return res.deriv_part;
}

inline GridFunction derivative(const GridFunction& u) {
    if (u.grid().is_circle()) return spectral_derivative(u);
    // centered differences, one-sided at the window edges
    const auto& v = u.values();
    const double h = u.grid().spacing();
    std::vector<double> d(v.size());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d.front() = (v[1] - v[0]) / h;
    d.back() = (v[v.size() - 1] - v[v.size() - 2]) / h;
    return GridFunction(u.grid(), std::move(d));
}

} // namespace detail

/// BBM right-hand side -phi(D_x)(u + u^2/2).
inline GridFunction bbm_rhs(const GridFunction& u, std::string* warning = nullptr) {
    GridFunction payload = u.map([](double x) { return x + 0.5 * x * x; });
    return -1.0 * detail::apply_phi(payload, warning);
}

/// d_t u per the nonlocal BBM form; equals bbm_rhs.
inline GridFunction time_derivative(const GridFunction& u) { return bbm_rhs(u); }

/// d_tt u = phi(D_x)(phi p + u phi p) with p = u + u^2/2.
inline GridFunction time_derivative2(const GridFunction& u) {
    GridFunction payload = u.map([](double x) { return x + 0.5 * x * x; });
    GridFunction phi_p = detail::apply_phi(payload);
    return detail::apply_phi(phi_p + u * phi_p);
}

/// Camassa-Holm right-hand side -u d_x u - phi(D_x)(u^2 + (d_x u)^2 / 2).
inline GridFunction ch_rhs(const GridFunction& u, std::string* warning = nullptr) {
    GridFunction ux = detail::derivative(u);
    GridFunction payload = u * u + 0.5 * (ux * ux);
    GridFunction nonlocal = detail::apply_phi(payload, warning);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -u[i] * ux[i] - nonlocal[i];
    return GridFunction(u.grid(), std::move(v));
}

/// Coupled BBM system, component-wise -phi(D_x)(u + A u^2 + B uv + C v^2)
/// and -phi(D_x)(v + D u^2 + E uv + F v^2).
inline std::pair<GridFunction, GridFunction> system_rhs(const GridFunction& u,
                                                        const GridFunction& v,
                                                        const SystemCoefficients& c) {
    require_same_grid(u, v);
    std::vector<double> pu(u.size()), pv(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i], b = v[i];
        pu[i] = a + c.A * a * a + c.B * a * b + c.C * b * b;
        pv[i] = b + c.D * a * a + c.E * a * b + c.F * b * b;
    }
    return {-1.0 * detail::apply_phi(GridFunction(u.grid(), std::move(pu))),
            -1.0 * detail::apply_phi(GridFunction(u.grid(), std::move(pv)))};
}

/// Peakon c e^{-|x - ct|} sampled on a Line grid wide enough to hold it.
inline GridFunction peakon(double c, double t, const Grid& grid) {
    if (!grid.is_line()) throw std::invalid_argument("peakon: Line grids only");
    const double pos = c * t;
    const double dist = std::min(pos - grid.left(), grid.right() - pos);
    if (!(std::exp(-dist) < 1e-10))
        throw std::invalid_argument("peakon: peak too near the window boundary");
    return GridFunction::sample(grid, [&](double x) { return c * std::exp(-std::abs(x - pos)); });
}

namespace detail {

using Rhs = std::function<GridFunction(const GridFunction&)>;

inline void guard_blowup(const GridFunction& u, double t) {
    for (double v : u.values())
        if (!std::isfinite(v) || std::abs(v) > 1e6)
            throw std::runtime_error("evolve: blow-up guard tripped at t = " + std::to_string(t));
}

inline GridFunction rk4_step(const GridFunction& u, double dt, const Rhs& rhs) {
    GridFunction k1 = rhs(u);
    GridFunction k2 = rhs(u + 0.5 * dt * k1);
    GridFunction k3 = rhs(u + 0.5 * dt * k2);
    GridFunction k4 = rhs(u + dt * k3);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return GridFunction(u.grid(), std::move(v));
}

/// Exponential midpoint step of the Duhamel form: the linear group is
/// applied exactly, the nonlinear integral at second order.
inline GridFunction duhamel_step(const GridFunction& u, double dt) {
    auto nonlin = [](const GridFunction& w) {
        return apply_multiplier(w.map([](double x) { return 0.5 * x * x; }), MultiplierSpec::phi());
    };
    const auto half = MultiplierSpec::group(0.5 * dt);
    const auto full = MultiplierSpec::group(dt);
    GridFunction n0 = nonlin(u);
    GridFunction u_half = apply_multiplier(u + (-0.5 * dt) * n0, half);
    GridFunction n_half = nonlin(u_half);
    return apply_multiplier(u, full) + (-dt) * apply_multiplier(n_half, half);
}

inline Trajectory run_steps(const GridFunction& u0, const SolverConfig& cfg,
                            const std::function<GridFunction(const GridFunction&, double)>& step) {
    cfg.validate();
    const auto n_steps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));
    Trajectory traj;
    traj.config = cfg;
    const bool track = u0.grid().is_circle();
    auto snapshot = [&](const GridFunction& u, double t) {
        traj.times.push_back(t);
        traj.states.push_back(u);
        if (track) traj.invariant_history.push_back(invariants(u));
    };
    GridFunction u = u0;
    snapshot(u, 0.0);
    for (long i = 1; i <= n_steps; ++i) {
        u = step(u, cfg.dt);
        guard_blowup(u, static_cast<double>(i) * cfg.dt);
        if (i % cfg.snapshot_stride == 0 || i == n_steps)
            snapshot(u, static_cast<double>(i) * cfg.dt);
    }
    return traj;
}

} // namespace detail

/// Evolve with an arbitrary right-hand side (RK4). Used internally and by
/// time-reversal checks.
inline Trajectory evolve_with_rhs(const GridFunction& u0, const SolverConfig& cfg,
                                  const detail::Rhs& rhs) {
    return detail::run_steps(u0, cfg,
                             [&](const GridFunction& u, double dt) { return detail::rk4_step(u, dt, rhs); });
}

/// Sufficient contraction window for the Picard operator,
/// T = 1 / (4 (1 + sup|u0|)).
inline double picard_window(const GridFunction& u0) {
    return 1.0 / (4.0 * (1.0 + lp_norm(u0, std::numeric_limits<double>::infinity())));
}

/// Fixed-point iteration of v -> u0 - int_0^t phi(D_x)(v + v^2/2) dt' over
/// the whole window, with composite-trapezoid time quadrature on the dt grid.
inline Trajectory picard_solve(const GridFunction& u0, const SolverConfig& cfg) {
    cfg.validate();
    if (cfg.method != Method::PicardFixedPoint)
        throw std::invalid_argument("picard_solve: config method must be PicardFixedPoint");
    const double window = picard_window(u0);
    if (cfg.t_final > window)
        throw std::invalid_argument("picard_solve: t_final exceeds the contraction window " +
                                    std::to_string(window) + "; choose a smaller t_final");
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
    const std::size_t n = u0.size();

    std::vector<GridFunction> v(n_steps + 1, u0);
    std::vector<double> residuals;
    std::string warning;
    for (int iter = 0; iter < cfg.picard_max_iter; ++iter) {
        // g_j = -phi(D_x)(v_j + v_j^2/2), then cumulative trapezoid in time
        std::vector<GridFunction> g;
        g.reserve(n_steps + 1);
        for (const auto& vj : v) g.push_back(bbm_rhs(vj, &warning));
        std::vector<GridFunction> next;
        next.reserve(n_steps + 1);
        next.push_back(u0);
        std::vector<double> acc(n, 0.0);
        for (std::size_t j = 1; j <= n_steps; ++j) {
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) {
                acc[i] += 0.5 * cfg.dt * (g[j - 1][i] + g[j][i]);
                w[i] = u0[i] + acc[i];
            }
            next.emplace_back(u0.grid(), std::move(w));
        }
        double sup = 0.0;
        for (std::size_t j = 0; j <= n_steps; ++j)
            for (std::size_t i = 0; i < n; ++i)
                sup = std::max(sup, std::abs(next[j][i] - v[j][i]));
        v.swap(next);
        residuals.push_back(sup);
        if (sup < cfg.picard_tol) {
            Trajectory traj;
            traj.config = cfg;
            if (!warning.empty()) traj.warnings.push_back(warning);
            const bool track = u0.grid().is_circle();
            for (std::size_t j = 0; j <= n_steps; ++j) {
                if (j % static_cast<std::size_t>(cfg.snapshot_stride) != 0 && j != n_steps) continue;
                traj.times.push_back(static_cast<double>(j) * cfg.dt);
                traj.states.push_back(v[j]);
                if (track) traj.invariant_history.push_back(invariants(v[j]));
            }
            return traj;
        }
    }
    std::string hist;
    for (double r : residuals) hist += " " + std::to_string(r);
    throw std::runtime_error("picard_solve: no convergence after " +
                             std::to_string(cfg.picard_max_iter) + " iterations; residuals:" + hist);
}

/// Time evolution. RK4 works on either domain; ExponentialDuhamel needs the
/// exact group and is Circle-only; Picard dispatches to picard_solve.
inline Trajectory evolve(const GridFunction& u0, const SolverConfig& cfg) {
    cfg.validate();
    switch (cfg.method) {
        case Method::PicardFixedPoint:
            if (cfg.equation != Equation::BBM)
                throw std::invalid_argument("evolve: Picard supports the BBM equation only");
            return picard_solve(u0, cfg);
        case Method::RungeKutta4: {
            std::string warning;
            detail::Rhs rhs = cfg.equation == Equation::BBM
                                  ? detail::Rhs([&warning](const GridFunction& u) { return bbm_rhs(u, &warning); })
                                  : detail::Rhs([&warning](const GridFunction& u) { return ch_rhs(u, &warning); });
            Trajectory traj = evolve_with_rhs(u0, cfg, rhs);
            if (!warning.empty()) traj.warnings.push_back(warning);
            return traj;
        }
        case Method::ExponentialDuhamel: {
            if (!u0.grid().is_circle())
                throw std::invalid_argument("evolve: ExponentialDuhamel requires a Circle grid");
            if (cfg.equation != Equation::BBM)
                throw std::invalid_argument("evolve: ExponentialDuhamel supports the BBM equation only");
            return detail::run_steps(u0, cfg, [](const GridFunction& u, double dt) {
                return detail::duhamel_step(u, dt);
            });
        }
    }
    throw std::logic_error("evolve: unknown method");
}

/// Coupled BBM system evolution (RK4).
inline SystemTrajectory evolve_system(const GridFunction& u0, const GridFunction& v0,
                                      const SystemCoefficients& coeffs, const SolverConfig& cfg) {
    cfg.validate();
    require_same_grid(u0, v0);
    const auto n_steps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));
    SystemTrajectory traj;
    GridFunction u = u0, v = v0;
    auto snapshot = [&](double t) {
        traj.times.push_back(t);
        traj.u_states.push_back(u);
        traj.v_states.push_back(v);
    };
    auto step = [&](double dt) {
        auto [k1u, k1v] = system_rhs(u, v, coeffs);
        auto [k2u, k2v] = system_rhs(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v, coeffs);
        auto [k3u, k3v] = system_rhs(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v, coeffs);
        auto [k4u, k4v] = system_rhs(u + dt * k3u, v + dt * k3v, coeffs);
        std::vector<double> nu(u.size()), nv(u.size());
        for (std::size_t i = 0; i < nu.size(); ++i) {
            nu[i] = u[i] + dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            nv[i] = v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        u = GridFunction(u.grid(), std::move(nu));
        v = GridFunction(v.grid(), std::move(nv));
    };
    snapshot(0.0);
    for (long i = 1; i <= n_steps; ++i) {
        step(cfg.dt);
        detail::guard_blowup(u, static_cast<double>(i) * cfg.dt);
        detail::guard_blowup(v, static_cast<double>(i) * cfg.dt);
        if (i % cfg.snapshot_stride == 0 || i == n_steps) snapshot(static_cast<double>(i) * cfg.dt);
    }
    return traj;
}

} // namespace bbmlab
