// bbmlab command-line runner: config-driven experiments with deterministic,
// hash-manifested artifacts.
//
// Exit codes: 0 success, 1 execution error, 2 at least one hypothesis check
// reported a failure (a meaningful scientific outcome, not a crash).

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "bbmlab/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bbmlab;

namespace {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

struct Emitted {
    std::string name;
    std::string sha256;
};

struct RunContext {
    fs::path out_dir;
    std::vector<Emitted> files;

    void write(const std::string& name, const std::string& content) {
        std::ofstream os(out_dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (out_dir / name).string());
        os << content;
        files.push_back({name, sha256_hex(content)});
    }
};

// ---------------------------------------------------------------- config

Grid grid_from(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto n = j.at("n").get<std::size_t>();
    if (kind == "circle") return Grid(Circle{}, n);
    if (kind == "line")
        return Grid(Line{j.at("left").get<double>(), j.at("right").get<double>()}, n);
    throw std::invalid_argument("domain.kind must be 'circle' or 'line', got '" + kind + "'");
}

SolverConfig solver_from(const json& j) {
    SolverConfig cfg;
    const std::string m = j.value("method", "rk4");
    if (m == "rk4") cfg.method = Method::RungeKutta4;
    else if (m == "picard") cfg.method = Method::PicardFixedPoint;
    else if (m == "duhamel") cfg.method = Method::ExponentialDuhamel;
    else throw std::invalid_argument("solver.method must be rk4|picard|duhamel, got '" + m + "'");
    const std::string e = j.value("equation", "bbm");
    if (e == "bbm") cfg.equation = Equation::BBM;
    else if (e == "ch") cfg.equation = Equation::CamassaHolm;
    else throw std::invalid_argument("solver.equation must be bbm|ch, got '" + e + "'");
    cfg.dt = j.value("dt", 1e-3);
    cfg.t_final = j.value("t_final", 1.0);
    cfg.snapshot_stride = j.value("snapshot_stride", 100);
    cfg.picard_tol = j.value("picard_tol", 1e-12);
    cfg.picard_max_iter = j.value("picard_max_iter", 100);
    return cfg;
}

GridFunction initial_from(const json& j, const Grid& grid, std::uint64_t seed) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "sine") {
        const double amp = j.value("amplitude", 0.1);
        const double freq = j.value("frequency", 1.0);
        return GridFunction::sample(grid, [&](double x) {
            return amp * std::sin(2.0 * std::numbers::pi * freq * x);
        });
    }
    if (type == "abs-sine")
        return GridFunction::sample(grid, [](double x) {
            return std::abs(std::sin(std::numbers::pi * x));
        });
    if (type == "constant") {
        const double c = j.at("value").get<double>();
        return GridFunction::sample(grid, [&](double) { return c; });
    }
    if (type == "step")
        return stationary_step(j.at("c0").get<double>(), j.at("a").get<double>(),
                               j.at("b").get<double>(), grid);
    if (type == "spectral-law") {
        SpectralLaw law{j.at("slope").get<double>(), j.value("amplitude", 1.0),
                        j.value("k_max", long{1} << 20), j.value("seed", seed)};
        return law.realize(grid);
    }
    if (type == "peakon") return peakon(j.value("c", 1.0), 0.0, grid);
    if (type == "inline") {
        auto v = j.at("values").get<std::vector<double>>();
        return GridFunction(grid, std::move(v));
    }
    throw std::invalid_argument("initial_data.type '" + type + "' is not recognized");
}

// ------------------------------------------------------------ experiments

// Each handler returns true when every hypothesis check passed; artifacts go
// through ctx. Configs are pure JSON so replays are bit-exact.

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool exp_stationary(const json& cfg, RunContext& ctx) {
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = initial_from(cfg.at("initial_data"), grid, cfg.value("seed", 0));
    Trajectory traj = evolve(u0, solver_from(cfg.at("solver")));
    double drift = 0.0;
    for (const auto& s : traj.states) drift = std::max(drift, sup_diff(s, u0));
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    ctx.write("trajectory.csv", csv.str());
    if (grid.is_circle()) {
        std::ostringstream d;
        write_drift_csv(d, traj);
        ctx.write("drift.csv", d.str());
    }
    const double tol = cfg.at("params").value("sup_drift_tol", 1e-10);
    json report = {{"sup_drift", drift},
                   {"sup_drift_tol", tol},
                   {"stationary", drift <= tol},
                   {"warnings", traj.warnings}};
    if (grid.is_circle()) report["invariant_drift"] = to_json(drift_report(traj));
    ctx.write("report.json", report.dump(2) + "\n");
    return drift <= tol;
}

bool exp_conservation(const json& cfg, RunContext& ctx) {
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = initial_from(cfg.at("initial_data"), grid, cfg.value("seed", 0));
    Trajectory traj = evolve(u0, solver_from(cfg.at("solver")));
    DriftReport drift = drift_report(traj);
    std::ostringstream d;
    write_drift_csv(d, traj);
    ctx.write("drift.csv", d.str());
    const auto& params = cfg.at("params");
    const bool ok = drift.I1 <= params.value("i1_tol", 1e-13) &&
                    drift.I2 <= params.value("i23_tol", 1e-8) &&
                    drift.I3 <= params.value("i23_tol", 1e-8);
    json report = {{"drift", to_json(drift)}, {"conserved", ok}};
    ctx.write("report.json", report.dump(2) + "\n");
    return ok;
}

bool exp_method_agreement(const json& cfg, RunContext& ctx) {
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = initial_from(cfg.at("initial_data"), grid, cfg.value("seed", 0));
    SolverConfig base = solver_from(cfg.at("solver"));
    auto run = [&](Method m) {
        SolverConfig c = base;
        c.method = m;
        return evolve(u0, c).final_state();
    };
    GridFunction rk = run(Method::RungeKutta4);
    GridFunction pic = run(Method::PicardFixedPoint);
    GridFunction duh = run(Method::ExponentialDuhamel);
    const double d_rp = sup_diff(rk, pic), d_rd = sup_diff(rk, duh), d_pd = sup_diff(pic, duh);
    const double tol = cfg.at("params").value("pairwise_tol", 1e-7);
    const bool ok = d_rp <= tol && d_rd <= tol && d_pd <= tol;
    json report = {{"rk4_vs_picard", d_rp},
                   {"rk4_vs_duhamel", d_rd},
                   {"picard_vs_duhamel", d_pd},
                   {"pairwise_tol", tol},
                   {"agree", ok}};
    ctx.write("report.json", report.dump(2) + "\n");
    return ok;
}

bool exp_regularity_gain(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = initial_from(cfg.at("initial_data"), grid, cfg.value("seed", 0));
    SolverConfig solver = solver_from(cfg.at("solver"));
    Trajectory traj = evolve(u0, solver);
    const double s_nominal = params.at("s_nominal").get<double>();
    RegularityReport rep = regularity_gain(u0, traj, s_nominal);
    const double s_prime = s_nominal + rep.gain_predicted;
    SpectralLaw law{cfg.at("initial_data").at("slope").get<double>(),
                    cfg.at("initial_data").value("amplitude", 1.0),
                    cfg.at("initial_data").value("k_max", long{1} << 20),
                    static_cast<std::uint64_t>(
                        cfg.at("initial_data").value("seed", cfg.value("seed", 0)))};
    rep.refinement_ratios = refinement_sweep(law, solver, s_prime - 0.05, {256, 512, 1024});
    const double min_gain = params.value("min_gain", 0.0);
    const bool ok = rep.zero_difference ? false : rep.gain_measured >= min_gain;
    json report = to_json(rep);
    report["min_gain"] = min_gain;
    report["gain_ok"] = ok;
    ctx.write("report.json", report.dump(2) + "\n");
    return ok;
}

bool exp_singularity(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = initial_from(cfg.at("initial_data"), grid, cfg.value("seed", 0));
    Trajectory traj = evolve(u0, solver_from(cfg.at("solver")));
    const int j = params.value("j", 1);
    const double eta = params.value("eta", 0.5);
    SingularitySet ref = singularity_localize(u0, j, eta);
    const double cell = grid.spacing();
    bool persistent = true;
    json snapshots = json::array();
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        SingularitySet now = singularity_localize(traj.states[s], j, eta);
        bool match = now.points.size() == ref.points.size();
        for (std::size_t i = 0; match && i < now.points.size(); ++i) {
            double d = std::abs(now.points[i] - ref.points[i]);
            if (grid.is_circle()) d = std::min(d, 1.0 - d);
            match = d <= cell + 1e-12;
        }
        persistent = persistent && match;
        snapshots.push_back({{"t", traj.times[s]}, {"set", to_json(now)}, {"matches", match}});
    }
    json report = {{"reference", to_json(ref)}, {"snapshots", snapshots}, {"persistent", persistent}};
    ctx.write("report.json", report.dump(2) + "\n");
    return persistent;
}

bool exp_peakon(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    const double c = params.value("c", 1.0);
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = peakon(c, 0.0, grid);
    SolverConfig solver = solver_from(cfg.at("solver"));
    Trajectory traj = evolve(u0, solver);
    json track = json::array();
    double worst = 0.0;
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const auto& v = traj.states[s].values();
        std::size_t arg = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[arg]) arg = i;
        // sub-grid position: ln u has slopes +-1 on the flanks, so intersect
        // the two side lines, skipping the numerically rounded tip
        double a_left = 0.0, a_right = 0.0;
        int n_side = 0;
        for (int m = 3; m <= 10; ++m) {
            if (arg < static_cast<std::size_t>(m) || arg + m >= v.size()) break;
            a_left += std::log(v[arg - m]) - grid.point(arg - m);
            a_right += std::log(v[arg + m]) + grid.point(arg + m);
            ++n_side;
        }
        const double pos = n_side > 0 ? 0.5 * (a_right - a_left) / n_side : grid.point(arg);
        const double t = traj.times[s];
        track.push_back({{"t", t}, {"peak", pos}});
        if (t > 0.0) worst = std::max(worst, std::abs(pos - c * t) / std::abs(c * t));
    }
    const double tol = params.value("rel_tol", 0.02);
    const bool ok = worst <= tol;
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    ctx.write("trajectory.csv", csv.str());
    json report = {{"c", c}, {"track", track}, {"worst_relative_error", worst}, {"speed_ok", ok}};
    ctx.write("report.json", report.dump(2) + "\n");
    return ok;
}

bool exp_ch_uc(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    Grid grid = grid_from(cfg.at("domain"));
    const double a = params.value("a", -1.0), b = params.value("b", 1.0);
    const double blo = params.value("bump_left", 2.0), bhi = params.value("bump_right", 5.0);
    const double amp = params.value("bump_amplitude", 0.5);
    GridFunction u = GridFunction::sample(grid, [&](double x) {
        const double xi = (2.0 * x - blo - bhi) / (bhi - blo);
        return std::abs(xi) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - xi * xi)) : 0.0;
    });
    UCReport rep = ch_uc_check(u, a, b);
    json report = to_json(rep);
    report["expected_verdict"] = params.value("expected_verdict", "HypothesisFails");
    ctx.write("report.json", report.dump(2) + "\n");
    std::ostringstream csv;
    write_function_csv(csv, u);
    ctx.write("data.csv", csv.str());
    return rep.verdict != Verdict::HypothesisFails;
}

bool exp_tha2_search(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    Grid grid = grid_from(cfg.at("domain"));
    const double a = params.value("a", 0.3), b = params.value("b", 0.6);
    const double amp = params.value("amplitude", 0.2);
    // u = -1 on [a,b], a nonnegative bump outside: the decomposition then
    // forces d_t u(b) < d_t u(a), demonstrating the theorem's dichotomy
    const double blo = params.value("bump_left", b + 0.05);
    const double bhi = params.value("bump_right", 0.98);
    GridFunction u = GridFunction::sample(grid, [&](double x) {
        const double xi = (2.0 * x - blo - bhi) / (bhi - blo);
        return -1.0 + (std::abs(xi) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - xi * xi)) : 0.0);
    });
    UCReport rep = a_decomposition(u, a, b);
    json report = to_json(rep);
    ctx.write("report.json", report.dump(2) + "\n");
    std::ostringstream csv;
    write_function_csv(csv, u);
    ctx.write("data.csv", csv.str());
    return rep.verdict != Verdict::HypothesisFails;
}

bool exp_tha3(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    const double c0 = params.value("c0", 1.0);
    const double b = params.value("b", 1.0);
    const double M = params.value("M", 25.0);
    Grid grid = grid_from(cfg.at("domain"));
    Tha3Construction con = construct_tha3(c0, b, M, grid);
    GridFunction dt = time_derivative(con.u0);
    double grid_dt_max = 0.0;
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        const double x = grid.point(i);
        if (x >= 0.0 && x <= b) grid_dt_max = std::max(grid_dt_max, std::abs(dt[i]));
    }
    const double tol = params.value("residual_tol", 1e-8);
    const bool ok = con.residual_on_interval <= tol && con.dt_max_on_interval <= tol;
    json report = to_json(con);
    report["grid_dt_max_on_interval"] = grid_dt_max;
    report["residual_tol"] = tol;
    report["residual_ok"] = ok;
    ctx.write("report.json", report.dump(2) + "\n");
    std::ostringstream csv;
    write_function_csv(csv, con.u0);
    ctx.write("u0.csv", csv.str());
    return ok;
}

bool exp_thap3(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    const double c0 = params.value("c0", 0.0);
    const double a = params.value("a", 0.3), b = params.value("b", 0.6);
    Grid grid = grid_from(cfg.at("domain"));
    Thap3Construction con = construct_thap3(c0, a, b, grid);
    // trajectory cross-check: centered difference of two short evolutions
    const double dt_step = params.value("check_dt", 1e-4);
    SolverConfig fwd;
    fwd.dt = dt_step;
    fwd.t_final = dt_step;
    fwd.snapshot_stride = 1;
    Trajectory tf = evolve(con.v0, fwd);
    Trajectory tb = evolve_with_rhs(con.v0, fwd, [](const GridFunction& u) {
        return -1.0 * bbm_rhs(u);
    });
    const std::size_t ia = grid.index_of(a), ib = grid.index_of(b);
    const double dt_a =
        (tf.final_state()[ia] - tb.final_state()[ia]) / (2.0 * dt_step);
    const double dt_b =
        (tf.final_state()[ib] - tb.final_state()[ib]) / (2.0 * dt_step);
    const double measured = dt_b - dt_a;
    const double tol = params.value("trajectory_tol", 1e-8);
    const bool ok = std::abs(con.q_value) <= 1e-10 && std::abs(measured) <= tol;
    json report = to_json(con);
    report["trajectory_dt_diff"] = measured;
    report["trajectory_tol"] = tol;
    report["q_ok"] = ok;
    ctx.write("report.json", report.dump(2) + "\n");
    std::ostringstream csv;
    write_function_csv(csv, con.v0);
    ctx.write("v0.csv", csv.str());
    return ok;
}

bool exp_tha4(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    Grid grid = grid_from(cfg.at("domain"));
    const double c0 = params.value("c0", 0.0);
    const double a = params.value("a", 0.3), b = params.value("b", 0.6);
    const double amp = params.value("bump_amplitude", -0.3);
    GridFunction u = GridFunction::sample(grid, [&](double x) {
        const double xi = (2.0 * x - a - b) / (b - a);
        return c0 + (std::abs(xi) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - xi * xi)) : 0.0);
    });
    UCReport rep = uc_verdict_tha4(u, a, b, c0, Tha4Branch::Cond1);
    json report = to_json(rep);
    ctx.write("report.json", report.dump(2) + "\n");
    return rep.verdict != Verdict::HypothesisFails;
}

bool exp_system_reduction(const json& cfg, RunContext& ctx) {
    const auto& params = cfg.at("params");
    Grid grid = grid_from(cfg.at("domain"));
    GridFunction u0 = initial_from(cfg.at("initial_data"), grid, cfg.value("seed", 0));
    GridFunction v0 = GridFunction::zero(grid);
    SystemCoefficients coeffs;
    coeffs.A = params.value("A", 0.5);
    coeffs.B = params.value("B", 0.3);
    coeffs.C = params.value("C", 0.7);
    coeffs.D = params.value("D", 0.0);
    coeffs.E = params.value("E", 0.2);
    coeffs.F = params.value("F", 0.4);
    SolverConfig solver = solver_from(cfg.at("solver"));
    SystemTrajectory sys = evolve_system(u0, v0, coeffs, solver);
    Trajectory scalar = evolve(u0, solver);
    double worst_u = 0.0, worst_v = 0.0;
    for (std::size_t s = 0; s < sys.times.size(); ++s) {
        worst_u = std::max(worst_u, sup_diff(sys.u_states[s], scalar.states[s]));
        worst_v = std::max(worst_v, lp_norm(sys.v_states[s], std::numeric_limits<double>::infinity()));
    }
    const double tol = params.value("reduction_tol", 1e-10);
    const bool ok = worst_u <= tol && worst_v <= tol;
    json report = {{"max_u_deviation", worst_u},
                   {"max_v_norm", worst_v},
                   {"reduction_tol", tol},
                   {"reduces", ok}};
    ctx.write("report.json", report.dump(2) + "\n");
    return ok;
}

// ---------------------------------------------------------------- catalog

struct Preset {
    std::string description;
    json config;
    bool (*handler)(const json&, RunContext&);
};

const std::map<std::string, Preset>& catalog() {
    static const std::map<std::string, Preset> presets = {
        {"zz1-stationary",
         {"two-level periodic stationary step (THAP2/zz1 family): evolves and checks sup drift",
          {{"experiment", "zz1-stationary"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 512}}},
           {"initial_data", {{"type", "step"}, {"c0", -2.0}, {"a", 0.25}, {"b", 0.75}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 5.0}, {"snapshot_stride", 500}}},
           {"params", {{"sup_drift_tol", 1e-10}}}},
          exp_stationary}},
        {"ex1-stationary",
         {"the -2/0 step on the line (THA2/ex1): exact weak stationary solution",
          {{"experiment", "ex1-stationary"},
           {"seed", 0},
           {"domain", {{"kind", "line"}, {"n", 4096}, {"left", -20.0}, {"right", 20.0}}},
           {"initial_data", {{"type", "step"}, {"c0", -2.0}, {"a", -2.0}, {"b", 2.0}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 5.0}, {"snapshot_stride", 500}}},
           {"params", {{"sup_drift_tol", 1e-10}}}},
          exp_stationary}},
        {"conservation",
         {"invariant drift of I1/I2/I3 along a smooth periodic run (cl)",
          {{"experiment", "conservation"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 256}}},
           {"initial_data", {{"type", "sine"}, {"amplitude", 0.1}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 10.0}, {"snapshot_stride", 100}}},
           {"params", {{"i1_tol", 1e-13}, {"i23_tol", 1e-8}}}},
          exp_conservation}},
        {"method-agreement",
         {"Picard vs RK4 vs exponential Duhamel inside the contraction window",
          {{"experiment", "method-agreement"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 256}}},
           {"initial_data", {{"type", "sine"}, {"amplitude", 0.1}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 0.1}, {"snapshot_stride", 100}}},
           {"params", {{"pairwise_tol", 1e-7}}}},
          exp_method_agreement}},
        {"regularity-gain",
         {"spectral-slope gain of u(t)-u0 vs the s+1/2 (capped at 1) prediction (TH1/TH1b)",
          {{"experiment", "regularity-gain"},
           {"seed", 7},
           {"domain", {{"kind", "circle"}, {"n", 1024}}},
           {"initial_data", {{"type", "spectral-law"}, {"slope", 1.5}, {"amplitude", 1.0}, {"seed", 7}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 0.5}, {"snapshot_stride", 500}}},
           {"params", {{"s_nominal", 1.0}, {"min_gain", 0.8}}}},
          exp_regularity_gain}},
        {"singularity-persistence",
         {"kink of |sin(pi x)| stays put under the flow (cons/regA1)",
          {{"experiment", "singularity-persistence"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 2048}}},
           {"initial_data", {{"type", "abs-sine"}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 1.0}, {"snapshot_stride", 200}}},
           {"params", {{"j", 1}, {"eta", 0.5}}}},
          exp_singularity}},
        {"peakon-speed",
         {"Camassa-Holm peakon travels at speed c (peakon/CH)",
          {{"experiment", "peakon-speed"},
           {"seed", 0},
           {"domain", {{"kind", "line"}, {"n", 8192}, {"left", -30.0}, {"right", 30.0}}},
           {"initial_data", {{"type", "peakon"}, {"c", 1.0}}},
           {"solver",
            {{"method", "rk4"}, {"equation", "ch"}, {"dt", 1e-3}, {"t_final", 0.5}, {"snapshot_stride", 100}}},
           {"params", {{"c", 1.0}, {"rel_tol", 0.02}}}},
          exp_peakon}},
        {"ch-uc",
         {"CH unique continuation (IVPCH2): off-interval bump forces strictly decreasing d_t u "
          "(expected verdict HypothesisFails, exit code 2)",
          {{"experiment", "ch-uc"},
           {"seed", 0},
           {"domain", {{"kind", "line"}, {"n", 4096}, {"left", -20.0}, {"right", 20.0}}},
           {"initial_data", {{"type", "constant"}, {"value", 0.0}}},
           {"params",
            {{"a", -1.0}, {"b", 1.0}, {"bump_left", 2.0}, {"bump_right", 5.0}, {"bump_amplitude", 0.5}}}},
          exp_ch_uc}},
        {"tha2-search",
         {"A1..A4 decomposition on u = -1 on [a,b] with off-interval bump (THA2/THAP2; "
          "expected verdict HypothesisFails, exit code 2)",
          {{"experiment", "tha2-search"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 1024}}},
           {"initial_data", {{"type", "constant"}, {"value", -1.0}}},
           {"params", {{"a", 0.3}, {"b", 0.6}, {"amplitude", 0.2}}}},
          exp_tha2_search}},
        {"tha3-construct",
         {"compactly supported u0 with u0 = c0 on [0,b] and d_t u = 0 there (THA3)",
          {{"experiment", "tha3-construct"},
           {"seed", 0},
           {"domain", {{"kind", "line"}, {"n", 1 << 20}, {"left", -34.0}, {"right", 35.0}}},
           {"params", {{"c0", 1.0}, {"b", 1.0}, {"M", 25.0}, {"residual_tol", 1e-8}}}},
          exp_tha3}},
        {"thap3-construct",
         {"periodic v0 = c0 on [a,b] with Q(v0) = 0 via sign bracket and bisection (THAP3)",
          {{"experiment", "thap3-construct"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 1280}}},
           {"params", {{"c0", 0.0}, {"a", 0.3}, {"b", 0.6}, {"trajectory_tol", 1e-8}}}},
          exp_thap3}},
        {"tha4-check",
         {"general-level branch check with payload f(u)-f(c0) (THA4/THAP4; the interior bump "
          "violates the endpoint derivative inequality, exit code 2)",
          {{"experiment", "tha4-check"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 1024}}},
           {"params", {{"c0", 0.0}, {"a", 0.3}, {"b", 0.6}, {"bump_amplitude", -0.3}}}},
          exp_tha4}},
        {"system-reduction",
         {"coupled system with v0 = 0, D = 0, A = 1/2 reduces to scalar BBM (sys-bbm)",
          {{"experiment", "system-reduction"},
           {"seed", 0},
           {"domain", {{"kind", "circle"}, {"n", 256}}},
           {"initial_data", {{"type", "sine"}, {"amplitude", 0.2}}},
           {"solver", {{"method", "rk4"}, {"dt", 1e-3}, {"t_final", 1.0}, {"snapshot_stride", 100}}},
           {"params", {{"A", 0.5}, {"D", 0.0}, {"reduction_tol", 1e-10}}}},
          exp_system_reduction}},
    };
    return presets;
}

// ------------------------------------------------------------------ runner

// 0 = ok, 2 = hypothesis failure; throws on execution errors.
int run_config(const json& cfg, const fs::path& out_dir) {
    const std::string experiment = cfg.at("experiment").get<std::string>();
    auto it = catalog().find(experiment);
    if (it == catalog().end())
        throw std::invalid_argument("unknown experiment '" + experiment + "'; see `bbmlab list`");
    fs::create_directories(out_dir);

    RunContext ctx{out_dir, {}};
    ctx.write("config.json", cfg.dump(2) + "\n");
    const auto start = std::chrono::steady_clock::now();
    const bool ok = it->second.handler(cfg, ctx);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json files = json::array();
    for (const auto& f : ctx.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}});
    json manifest = {{"experiment", experiment},
                     {"config", cfg},
                     {"versions", {{"bbmlab", "0.1.0"}, {"compiler", __VERSION__}}},
                     {"wall_clock_seconds", secs},
                     {"hypothesis_ok", ok},
                     {"files", files}};
    std::ofstream os(out_dir / "manifest.json", std::ios::binary);
    os << manifest.dump(2) << "\n";
    return ok ? 0 : 2;
}

unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BBMLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) cap = static_cast<unsigned>(v);
    }
    return cap;
}

json apply_param(json cfg, const std::string& key, const std::string& value) {
    json v;
    try {
        v = json::parse(value);
    } catch (const json::exception&) {
        v = value;  // unquoted strings (e.g. method=rk4)
    }
    static const std::vector<std::string> solver_keys = {
        "method", "equation", "dt", "t_final", "snapshot_stride", "picard_tol", "picard_max_iter"};
    static const std::vector<std::string> domain_keys = {"kind", "n", "left", "right"};
    if (key == "seed" || key == "name") cfg[key] = v;
    else if (std::find(solver_keys.begin(), solver_keys.end(), key) != solver_keys.end())
        cfg["solver"][key] = v;
    else if (std::find(domain_keys.begin(), domain_keys.end(), key) != domain_keys.end())
        cfg["domain"][key] = v;
    else cfg["params"][key] = v;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bbmlab: a numerical laboratory for the nonlocal BBM equation"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run experiments from JSON config files");
    std::vector<std::string> config_paths;
    std::string out_root = "out";
    bool parallel = false;
    run_cmd->add_option("--config", config_paths, "config file (repeatable)")->required();
    run_cmd->add_option("--out", out_root, "output directory root");
    run_cmd->add_flag("--parallel", parallel, "run configs concurrently (capped by BBMLAB_THREADS)");

    auto* preset_cmd = app.add_subcommand("preset", "run a named preset");
    std::string preset_name;
    std::vector<std::string> param_overrides;
    std::string preset_out = "out";
    preset_cmd->add_option("name", preset_name, "preset name (see `list`)")->required();
    preset_cmd->add_option("--param", param_overrides, "override, e.g. --param c0=0.5");
    preset_cmd->add_option("--out", preset_out, "output directory");

    auto* list_cmd = app.add_subcommand("list", "list available presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& [name, preset] : catalog())
                std::cout << name << "\n    " << preset.description << "\n";
            return 0;
        }
        if (preset_cmd->parsed()) {
            auto it = catalog().find(preset_name);
            if (it == catalog().end()) {
                std::cerr << "error: unknown preset '" << preset_name << "'; see `bbmlab list`\n";
                return 1;
            }
            json cfg = it->second.config;
            for (const auto& kv : param_overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: --param expects k=v, got '" << kv << "'\n";
                    return 1;
                }
                cfg = apply_param(std::move(cfg), kv.substr(0, eq), kv.substr(eq + 1));
            }
            const int rc = run_config(cfg, fs::path(preset_out) / preset_name);
            std::cout << preset_name << ": " << (rc == 0 ? "ok" : "hypothesis check failed")
                      << " (artifacts in " << (fs::path(preset_out) / preset_name).string() << ")\n";
            return rc;
        }
        // run
        std::vector<json> configs;
        for (const auto& path : config_paths) {
            std::ifstream is(path);
            if (!is) {
                std::cerr << "error: cannot open config " << path << "\n";
                return 1;
            }
            try {
                configs.push_back(json::parse(is));
            } catch (const json::exception& e) {
                std::cerr << "error: " << path << ": " << e.what() << "\n";
                return 1;
            }
        }
        std::atomic<int> worst{0};
        std::atomic<std::size_t> next{0};
        std::mutex log_mu;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= configs.size()) return;
                const json& cfg = configs[i];
                const std::string name =
                    cfg.value("name", cfg.value("experiment", "run-" + std::to_string(i)));
                try {
                    const int rc = run_config(cfg, fs::path(out_root) / name);
                    int cur = worst.load();
                    while (rc > cur && !worst.compare_exchange_weak(cur, rc)) {}
                    std::lock_guard lock(log_mu);
                    std::cout << name << ": " << (rc == 0 ? "ok" : "hypothesis check failed") << "\n";
                } catch (const std::exception& e) {
                    worst.store(1);
                    std::lock_guard lock(log_mu);
                    std::cerr << "error: " << name << ": " << e.what() << "\n";
                }
            }
        };
        const unsigned n_workers =
            parallel ? std::min<unsigned>(thread_cap(), configs.size()) : 1u;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t + 1 < n_workers; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        return worst.load();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
