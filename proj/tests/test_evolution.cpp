#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "bbmlab/diagnostics.hpp"
#include "bbmlab/evolution.hpp"
#include "bbmlab/rng.hpp"

using namespace bbmlab;

namespace {

GridFunction small_sine(const Grid& g, double amp = 0.1) {
    return GridFunction::sample(g, [&](double x) {
        return amp * std::sin(2.0 * std::numbers::pi * x);
    });
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("solver config validation", "[evolution]") {
    SolverConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = 2.0;
    cfg.t_final = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("bbm rhs vanishes on constants", "[evolution]") {
    Grid g(Circle{}, 64);
    auto c = GridFunction::sample(g, [](double) { return 0.7; });
    CHECK(lp_norm(bbm_rhs(c), std::numeric_limits<double>::infinity()) < 1e-14);
    Grid l(Line{-10.0, 10.0}, 512);
    // on the line only payload-zero constants are fixed: u = 0 and u = -2
    auto m2 = GridFunction::sample(l, [](double) { return -2.0; });
    CHECK(lp_norm(bbm_rhs(m2), std::numeric_limits<double>::infinity()) < 1e-14);
}

TEST_CASE("second time derivative matches the flow's finite difference", "[evolution]") {
    Grid g(Circle{}, 256);
    GridFunction u0 = small_sine(g, 0.2);
    const double eps = 1e-4;
    SolverConfig cfg;
    cfg.dt = eps / 4.0;
    cfg.t_final = eps;
    cfg.snapshot_stride = 4;
    Trajectory fwd = evolve(u0, cfg);
    Trajectory bwd = evolve_with_rhs(u0, cfg, [](const GridFunction& u) { return -1.0 * bbm_rhs(u); });
    GridFunction dtt_fd = (1.0 / (eps * eps)) *
                          (fwd.final_state() + bwd.final_state() + (-2.0) * u0);
    GridFunction dtt = time_derivative2(u0);
    CHECK(sup_diff(dtt_fd, dtt) < 1e-6);
}

TEST_CASE("rk4 evolution is time reversible", "[evolution]") {
    Grid g(Circle{}, 256);
    GridFunction u0 = small_sine(g, 0.2);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.2;
    cfg.snapshot_stride = 200;
    Trajectory fwd = evolve(u0, cfg);
    Trajectory back = evolve_with_rhs(fwd.final_state(), cfg,
                                      [](const GridFunction& u) { return -1.0 * bbm_rhs(u); });
    CHECK(sup_diff(back.final_state(), u0) < 1e-11);
}

TEST_CASE("picard converges inside its window and matches rk4", "[evolution]") {
    Grid g(Circle{}, 128);
    GridFunction u0 = small_sine(g);
    const double window = picard_window(u0);
    CHECK(window == Catch::Approx(1.0 / (4.0 * 1.1)).epsilon(1e-12));

    SolverConfig pic;
    pic.method = Method::PicardFixedPoint;
    pic.dt = 1e-3;
    pic.t_final = 0.1;
    pic.snapshot_stride = 100;
    Trajectory tp = picard_solve(u0, pic);

    SolverConfig rk;
    rk.dt = 1e-3;
    rk.t_final = 0.1;
    rk.snapshot_stride = 100;
    Trajectory tr = evolve(u0, rk);
    CHECK(sup_diff(tp.final_state(), tr.final_state()) < 1e-8);

    pic.t_final = 10.0;  // far beyond the contraction window
    CHECK_THROWS_WITH(picard_solve(u0, pic), Catch::Matchers::ContainsSubstring("window"));
}

TEST_CASE("duhamel stepping reduces to the exact group for linear dynamics", "[evolution]") {
    Grid g(Circle{}, 256);
    GridFunction u0 = small_sine(g, 1e-7);  // nonlinear term is O(amp^2)
    SolverConfig cfg;
    cfg.method = Method::ExponentialDuhamel;
    cfg.dt = 0.05;
    cfg.t_final = 1.0;
    cfg.snapshot_stride = 20;
    Trajectory traj = evolve(u0, cfg);
    GridFunction exact = apply_multiplier(u0, MultiplierSpec::group(1.0));
    CHECK(sup_diff(traj.final_state(), exact) < 1e-13);
    CHECK_THROWS_AS(evolve(GridFunction::zero(Grid(Line{0.0, 1.0}, 16)), cfg), std::invalid_argument);
}

TEST_CASE("mean is conserved exactly along circle trajectories", "[evolution][invariants]") {
    Grid g(Circle{}, 128);
    SpectralLaw law{1.2, 0.3, 1 << 20, 99};
    GridFunction u0 = law.realize(g) + GridFunction::sample(g, [](double) { return 0.05; });
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.05;
    cfg.snapshot_stride = 10;
    Trajectory traj = evolve(u0, cfg);
    DriftReport drift = drift_report(traj);
    CHECK(drift.I1 < 1e-14);
}

TEST_CASE("camassa-holm rhs and peakon sampling", "[evolution][ch]") {
    Grid l(Line{-30.0, 30.0}, 2049);  // node on the peak at 0
    CHECK(lp_norm(ch_rhs(GridFunction::zero(l)), std::numeric_limits<double>::infinity()) == 0.0);
    GridFunction p = peakon(1.0, 0.0, l);
    CHECK(lp_norm(p, std::numeric_limits<double>::infinity()) == Catch::Approx(1.0).margin(1e-6));
    CHECK_THROWS_AS(peakon(1.0, 29.5, l), std::invalid_argument);       // too near the boundary
    CHECK_THROWS_AS(peakon(1.0, 0.0, Grid(Circle{}, 64)), std::invalid_argument);
}

TEST_CASE("system with coupling moves v off zero; without, it reduces", "[evolution][system]") {
    Grid g(Circle{}, 128);
    GridFunction u0 = small_sine(g, 0.2);
    GridFunction v0 = GridFunction::zero(g);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.05;
    cfg.snapshot_stride = 50;

    SystemCoefficients coupled;
    coupled.A = 0.5;
    coupled.D = 1.0;  // feeds u^2 into v
    SystemTrajectory st = evolve_system(u0, v0, coupled, cfg);
    CHECK(lp_norm(st.v_states.back(), std::numeric_limits<double>::infinity()) > 1e-6);

    SystemCoefficients reduced;
    reduced.A = 0.5;
    reduced.B = 0.3;
    reduced.C = 0.7;
    reduced.E = 0.2;
    reduced.F = 0.4;
    SystemTrajectory sr = evolve_system(u0, v0, reduced, cfg);
    Trajectory scalar = evolve(u0, cfg);
    CHECK(sup_diff(sr.u_states.back(), scalar.final_state()) < 1e-12);
    CHECK(lp_norm(sr.v_states.back(), std::numeric_limits<double>::infinity()) < 1e-14);
}

TEST_CASE("group properties at the discrete level", "[multiplier][group]") {
    Grid g(Circle{}, 256);
    SpectralLaw law{1.0, 0.5, 1 << 20, 5};
    GridFunction f = law.realize(g);
    Spectrum sp = transform(f);
    // U(0) is the identity on coefficients, bit for bit
    Spectrum id = apply_multiplier(sp, MultiplierSpec::group(0.0));
    for (long k = sp.k_min(); k <= sp.k_max(); ++k) CHECK(id.coeff(k) == sp.coeff(k));
    // composition and isometry
    GridFunction two_step = apply_multiplier(apply_multiplier(f, MultiplierSpec::group(0.3)),
                                             MultiplierSpec::group(0.45));
    GridFunction one_step = apply_multiplier(f, MultiplierSpec::group(0.75));
    CHECK(sup_diff(two_step, one_step) < 1e-12);
    CHECK(lp_norm(one_step, 2.0) == Catch::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
}
