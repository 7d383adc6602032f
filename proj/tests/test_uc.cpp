#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>

#include "bbmlab/rng.hpp"
#include "bbmlab/unique_continuation.hpp"

using namespace bbmlab;

namespace {

double sup_norm(const GridFunction& f) {
    return lp_norm(f, std::numeric_limits<double>::infinity());
}

// trigonometric interpolant evaluation for quadrature oracles
double trig_eval(const Spectrum& sp, double y) {
    std::complex<double> acc = 0.0;
    for (long k = sp.k_min() + 1; k <= sp.k_max(); ++k)
        acc += sp.coeff(k) *
               std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(k) * y));
    return acc.real();
}

double bump01(double x, double lo, double hi) {
    const double xi = (2.0 * x - lo - hi) / (hi - lo);
    return std::abs(xi) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - xi * xi)) : 0.0;
}

} // namespace

TEST_CASE("nonlinearity map facts", "[uc]") {
    CHECK(f_map(-1.0) == -0.5);
    CHECK(conjugate_level(-2.0) == 0.0);
    CHECK(conjugate_level(-1.0) == -1.0);
    for (double c0 : {-3.7, -1.0, 0.0, 2.4}) {
        CHECK(conjugate_level(conjugate_level(c0)) == Catch::Approx(c0).margin(1e-15));
        CHECK(f_map(conjugate_level(c0)) == Catch::Approx(f_map(c0)).margin(1e-14));
    }
    // f(-1) is the global minimum
    for (double y = -4.0; y <= 4.0; y += 0.37) CHECK(f_map(y) >= -0.5);
}

TEST_CASE("stationary steps are exact fixed points", "[uc]") {
    Grid g(Circle{}, 512);
    GridFunction step = stationary_step(0.5, 0.25, 0.75, g);
    CHECK(step[g.index_of(0.5)] == 0.5);
    CHECK(step[g.index_of(0.9)] == -2.5);
    CHECK(sup_norm(bbm_rhs(step)) < 1e-12);

    GridFunction fixed = stationary_step(-1.0, 0.25, 0.75, g);
    for (std::size_t i = 0; i < g.n_points(); ++i) CHECK(fixed[i] == -1.0);

    Grid l(Line{-10.0, 10.0}, 1024);
    GridFunction ex1 = stationary_step(-2.0, -2.0, 2.0, l);
    CHECK(sup_norm(bbm_rhs(ex1)) == 0.0);  // payload is identically zero
    CHECK_THROWS_WITH(stationary_step(0.5, -2.0, 2.0, l),
                      Catch::Matchers::ContainsSubstring("decays"));
    CHECK_THROWS_AS(stationary_step(0.5, 0.75, 0.25, g), std::invalid_argument);
    CHECK_THROWS_AS(stationary_step(0.5, 0.25, 1.5, g), std::invalid_argument);
}

TEST_CASE("decomposition is identically zero at the forced constant", "[uc]") {
    for (bool circle : {true, false}) {
        // wide line window: the constant payload f(-1) truncates at the edges
        // with an e^{-distance} tail, which must stay below the 1e-12 bar
        Grid g = circle ? Grid(Circle{}, 256) : Grid(Line{-40.0, 40.0}, 4096);
        GridFunction u = GridFunction::sample(g, [](double) { return -1.0; });
        UCReport rep = circle ? a_decomposition(u, 0.3, 0.6) : a_decomposition(u, -3.0, 3.0);
        CHECK(std::abs(rep.A1) < 1e-12);
        CHECK(std::abs(rep.A2) < 1e-12);
        CHECK(std::abs(rep.A3) < 1e-12);
        CHECK(std::abs(rep.A4) < 1e-12);
        CHECK(std::abs(rep.identity_residual) < 1e-12);
        CHECK(rep.verdict == Verdict::ForcedConstant);
    }
}

TEST_CASE("off-interval bump forces the endpoint inequality to fail", "[uc]") {
    SECTION("circle") {
        Grid g(Circle{}, 1024);
        const double a = 0.3, b = 0.6;
        GridFunction u = GridFunction::sample(g, [&](double x) {
            return -1.0 + 0.2 * bump01(x, 0.65, 0.98);
        });
        UCReport rep = a_decomposition(u, a, b);
        CHECK(rep.verdict == Verdict::HypothesisFails);
        CHECK(std::abs(rep.A3) < 1e-12);
        CHECK(rep.A2 >= -1e-12);
        CHECK(rep.A4 > 1e-6);  // the bump sits in the (b,1) region
        CHECK(rep.A1 < -1e-6);
        CHECK(rep.A1 == Catch::Approx(-(rep.A2 + rep.A3 + rep.A4)).margin(1e-11));
    }
    SECTION("line") {
        Grid g(Line{-25.0, 25.0}, 1 << 13);
        GridFunction u = GridFunction::sample(g, [&](double x) {
            return -1.0 + 0.3 * bump01(x, 6.0, 12.0);
        });
        UCReport rep = a_decomposition(u, -5.0, 5.0);
        CHECK(rep.verdict == Verdict::HypothesisFails);
        CHECK(std::abs(rep.A3) < 1e-12);
        CHECK(rep.A2 >= -1e-12);
        CHECK(rep.A4 > 1e-6);
        CHECK(rep.A1 < -1e-6);
        CHECK(std::abs(rep.identity_residual) < 1e-8);
    }
}

TEST_CASE("decomposition identity holds for arbitrary slices", "[uc]") {
    SECTION("circle") {
        Grid g(Circle{}, 256);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            SpectralLaw law{1.2, 0.4, 1 << 20, seed};
            GridFunction u = law.realize(g);
            UCReport rep = a_decomposition(u, 0.21, 0.77);
            CHECK(std::abs(rep.identity_residual) < 1e-10);
            CHECK(rep.A2 >= -1e-12);  // nonnegative payload against a positive kernel
            CHECK(rep.A4 >= -1e-12);
        }
    }
    SECTION("line") {
        Grid g(Line{-25.0, 25.0}, 1 << 13);
        GridFunction u = GridFunction::sample(g, [](double x) {
            return 0.4 * std::exp(-0.5 * x * x) - 0.6 * std::exp(-(x - 4.0) * (x - 4.0));
        });
        UCReport rep = a_decomposition(u, -5.0, 5.0);
        CHECK(std::abs(rep.identity_residual) < 1e-8);
        CHECK(rep.A2 >= -1e-12);
        CHECK(rep.A4 >= -1e-12);
    }
}

TEST_CASE("region integrals match an independent quadrature oracle", "[uc][oracle]") {
    SECTION("circle") {
        Grid g(Circle{}, 128);
        SpectralLaw law{1.5, 0.3, 1 << 20, 44};
        GridFunction u = law.realize(g);
        const double a = 0.3, b = 0.7;
        UCReport rep = a_decomposition(u, a, b);
        GridFunction w = u.map([](double x) { return 0.5 * (x + 1.0) * (x + 1.0); });
        Spectrum sw = transform(w);
        auto kernel = [&](double y) {
            return periodic_green_deriv(b - y) - periodic_green_deriv(a - y);
        };
        auto integrand = [&](double y) { return kernel(y) * trig_eval(sw, y); };
        const double a2 = integrate(integrand, 0.0, a, 1e-11);
        const double a3 = integrate(integrand, a, b, 1e-11);
        const double a4 = integrate(integrand, b, 1.0, 1e-11);
        CHECK(rep.A2 == Catch::Approx(a2).margin(1e-9));
        CHECK(rep.A3 == Catch::Approx(a3).margin(1e-9));
        CHECK(rep.A4 == Catch::Approx(a4).margin(1e-9));
    }
    SECTION("line") {
        Grid g(Line{-25.0, 25.0}, 1 << 16);
        auto profile = [](double x) { return -1.0 + 0.3 * bump01(x, -12.0, 12.0); };
        GridFunction u = GridFunction::sample(g, profile);
        const double a = -5.0, b = 5.0;
        UCReport rep = a_decomposition(u, a, b);
        auto w = [&](double y) {
            const double v = profile(y) + 1.0;
            return 0.5 * v * v;
        };
        auto kernel = [&](double y) {
            auto dg = [](double z) { return z == 0.0 ? 0.0 : -0.5 * (z > 0 ? 1.0 : -1.0) * std::exp(-std::abs(z)); };
            return dg(b - y) - dg(a - y);
        };
        auto integrand = [&](double y) { return kernel(y) * w(y); };
        const double a2 = integrate(integrand, -25.0, a, 1e-11);
        const double a3 = integrate(integrand, a, b, 1e-11);
        const double a4 = integrate(integrand, b, 25.0, 1e-11);
        CHECK(rep.A2 == Catch::Approx(a2).margin(1e-6));
        CHECK(rep.A3 == Catch::Approx(a3).margin(1e-6));
        CHECK(rep.A4 == Catch::Approx(a4).margin(1e-6));
    }
}

TEST_CASE("kernel comparison inequalities at quadrature nodes", "[uc][kernels]") {
    auto dg_line = [](double z) {
        return z == 0.0 ? 0.0 : -0.5 * (z > 0 ? 1.0 : -1.0) * std::exp(-std::abs(z));
    };
    const double a = -1.3, b = 2.1;
    for (int i = 0; i <= 400; ++i) {
        const double y = -20.0 + 40.0 * i / 400.0;
        if (std::abs(y - a) < 1e-9 || std::abs(y - b) < 1e-9) continue;
        const double diff = dg_line(b - y) - dg_line(a - y);
        if (y < a || y > b) CHECK(diff > 0.0);    // outside: strict comparison
        else CHECK(diff < 0.0);                   // inside: reversed
    }
    const double ap = 0.27, bp = 0.81;
    for (int i = 0; i <= 400; ++i) {
        const double y = (i + 0.5) / 401.0;
        const double diff = periodic_green_deriv(bp - y) - periodic_green_deriv(ap - y);
        if (y < ap || y > bp) CHECK(diff > 0.0);
        else CHECK(diff < 0.0);
    }
}

TEST_CASE("q functional: zeros, signs, and level-shift invariance", "[uc]") {
    Grid g(Circle{}, 512);
    const double c0 = 0.3, a = 0.3, b = 0.6;
    auto constant = GridFunction::sample(g, [&](double) { return c0; });
    CHECK(std::abs(q_functional(constant, a, b, c0)) < 1e-13);

    GridFunction step = stationary_step(c0, a, b, g);
    CHECK(std::abs(q_functional(step, a, b, c0)) < 1e-10);

    GridFunction v1 = GridFunction::sample(g, [&](double x) {
        return c0 + 0.5 * (-1.0 - c0) * bump01(x, 0.0, a);
    });
    GridFunction v2 = GridFunction::sample(g, [&](double x) {
        return c0 + 0.5 * (c0 + 1.0) * bump01(x, b, 1.0);
    });
    CHECK(q_functional(v1, a, b, c0) > 0.0);
    CHECK(q_functional(v2, a, b, c0) < 0.0);

    // Q does not depend on the reference level at all
    SpectralLaw law{1.5, 0.2, 1 << 20, 8};
    GridFunction r = law.realize(g);
    const double q_ref = q_functional(r, a, b, 0.0);
    for (double level : {-2.0, 0.7, 3.1})
        CHECK(q_functional(r, a, b, level) == Catch::Approx(q_ref).margin(1e-12));

    CHECK_THROWS_AS(q_functional(r, 0.6, 0.3, c0), std::invalid_argument);
    CHECK_THROWS_AS(q_functional(GridFunction::zero(Grid(Line{0.0, 1.0}, 16)), a, b, c0),
                    std::invalid_argument);
}

TEST_CASE("thap3 constructor finds the interior zero of Q", "[uc][construct]") {
    Grid g(Circle{}, 1280);
    const double c0 = 0.0, a = 0.3, b = 0.6;
    Thap3Construction con = construct_thap3(c0, a, b, g);
    CHECK(con.lambda0 > 0.0);
    CHECK(con.lambda0 < 1.0);
    CHECK(std::abs(con.q_value) <= 1e-10);
    CHECK(con.q_v1 > 0.0);
    CHECK(con.q_v2 < 0.0);
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        const double x = g.point(i);
        if (x >= a && x <= b) CHECK(con.v0[i] == c0);
    }
    CHECK_THROWS_WITH(construct_thap3(-1.0, a, b, g), Catch::Matchers::ContainsSubstring("-1"));
    CHECK_THROWS_AS(construct_thap3(0.0, a, b, Grid(Line{0.0, 1.0}, 16)), std::invalid_argument);
}

TEST_CASE("tha3 constructor hits its integral targets", "[uc][construct]") {
    const double c0 = 1.0, b = 1.0, M = 25.0;
    Grid g(Line{-34.0, 35.0}, 1 << 17);
    Tha3Construction con = construct_tha3(c0, b, M, g);
    CHECK(con.alpha_target == Catch::Approx(1.5));
    CHECK(con.beta_target == Catch::Approx(1.5 * std::exp(-1.0)));
    CHECK(std::abs(con.alpha_achieved - con.alpha_target) <= 1e-10);
    CHECK(con.residual_on_interval <= 1e-8);
    CHECK(con.dt_max_on_interval <= 1e-8);
    bool exact_on_interval = true, compactly_supported = true;
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        const double x = g.point(i);
        if (x >= 0.0 && x <= b && con.u0[i] != c0) exact_on_interval = false;
        if ((x < -(2.0 * 3.0 + M) || x > b + 2.0 * 3.0 + M) && con.u0[i] != 0.0)
            compactly_supported = false;
    }
    CHECK(exact_on_interval);   // exact at sample points
    CHECK(compactly_supported);
    CHECK_THROWS_WITH(construct_tha3(-1.0, b, M, g), Catch::Matchers::ContainsSubstring("infimum"));
    CHECK_THROWS_AS(construct_tha3(c0, b, 5.0, g), std::invalid_argument);   // M too small
    CHECK_THROWS_AS(construct_tha3(c0, b, M, Grid(Line{-10.0, 10.0}, 1024)), std::invalid_argument);
}

TEST_CASE("tha4 verdicts across branches", "[uc]") {
    Grid g(Circle{}, 1024);
    const double c0 = 0.0, a = 0.3, b = 0.6;
    auto constant = GridFunction::sample(g, [&](double) { return c0; });
    CHECK(uc_verdict_tha4(constant, a, b, c0, Tha4Branch::Cond1).verdict == Verdict::ForcedConstant);

    // interior dip: f(u) <= f(c0) inside, = outside, but the identity forces
    // the endpoint derivative inequality to break
    GridFunction dip = GridFunction::sample(g, [&](double x) {
        return c0 - 0.3 * bump01(x, a, b);
    });
    UCReport r1 = uc_verdict_tha4(dip, a, b, c0, Tha4Branch::Cond1);
    CHECK(r1.verdict == Verdict::HypothesisFails);
    CHECK_THAT(r1.detail, Catch::Matchers::ContainsSubstring("derivative"));
    CHECK(std::abs(r1.identity_residual) < 1e-10);

    // interior rise violates cond2's derivative inequality symmetrically
    GridFunction rise = GridFunction::sample(g, [&](double x) {
        return c0 + 0.3 * bump01(x, a, b);
    });
    UCReport r2 = uc_verdict_tha4(rise, a, b, c0, Tha4Branch::Cond2);
    CHECK(r2.verdict == Verdict::HypothesisFails);

    // wrong interior sign for the selected branch is named as such
    UCReport r3 = uc_verdict_tha4(rise, a, b, c0, Tha4Branch::Cond1);
    CHECK(r3.verdict == Verdict::HypothesisFails);
    CHECK_THAT(r3.detail, Catch::Matchers::ContainsSubstring("interval sign"));

    // endpoint mismatch is inconclusive, not a failure
    auto off = GridFunction::sample(g, [&](double) { return c0 + 0.5; });
    CHECK(uc_verdict_tha4(off, a, b, c0, Tha4Branch::Cond1).verdict == Verdict::Inconclusive);
}

TEST_CASE("camassa-holm unique continuation check", "[uc][ch]") {
    Grid g(Line{-20.0, 20.0}, 4096);
    CHECK(ch_uc_check(GridFunction::zero(g), -1.0, 1.0).verdict == Verdict::ForcedConstant);

    GridFunction with_bump = GridFunction::sample(g, [](double x) {
        return 0.5 * bump01(x, 2.0, 5.0);
    });
    UCReport rep = ch_uc_check(with_bump, -1.0, 1.0);
    CHECK(rep.verdict == Verdict::HypothesisFails);
    CHECK(rep.A1 < 0.0);  // F(b) > F(a) for the nonnegative payload
    CHECK(std::abs(rep.identity_residual) < 1e-8);

    GridFunction pk = peakon(1.0, 0.0, Grid(Line{-30.0, 30.0}, 4096));
    CHECK(ch_uc_check(pk, -1.0, 1.0).verdict == Verdict::Inconclusive);
    CHECK_THROWS_AS(ch_uc_check(GridFunction::zero(Grid(Circle{}, 64)), 0.2, 0.4),
                    std::invalid_argument);
}
