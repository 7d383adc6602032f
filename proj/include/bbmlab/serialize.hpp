#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "bbmlab/diagnostics.hpp"
#include "bbmlab/unique_continuation.hpp"

namespace bbmlab {

/// Shortest round-trip decimal form of a double (17 significant digits is
/// always sufficient; trailing zeros trimmed by %g).
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << 't';
    for (std::size_t i = 0; i < traj.states.front().size(); ++i) os << ",x" << i;
    os << '\n';
    for (std::size_t row = 0; row < traj.times.size(); ++row) {
        os << format_double(traj.times[row]);
        for (std::size_t i = 0; i < traj.states[row].size(); ++i)
            os << ',' << format_double(traj.states[row][i]);
        os << '\n';
    }
}

inline void write_drift_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,I1,I2,I3\n";
    for (std::size_t row = 0; row < traj.invariant_history.size(); ++row) {
        const auto& iv = traj.invariant_history[row];
        os << format_double(traj.times[row]) << ',' << format_double(iv.I1) << ','
           << format_double(iv.I2) << ',' << format_double(iv.I3) << '\n';
    }
}

inline void write_function_csv(std::ostream& os, const GridFunction& u) {
    os << "x,u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        os << format_double(u.grid().point(i)) << ',' << format_double(u[i]) << '\n';
}

inline nlohmann::json to_json(const Grid& g) {
    if (g.is_circle()) return {{"domain", "circle"}, {"n", g.n_points()}};
    return {{"domain", "line"}, {"n", g.n_points()}, {"left", g.left()}, {"right", g.right()}};
}

inline nlohmann::json to_json(const InvariantTriple& iv) {
    return {{"I1", iv.I1}, {"I2", iv.I2}, {"I3", iv.I3}};
}

inline nlohmann::json to_json(const DriftReport& d) {
    return {{"I1", d.I1}, {"I2", d.I2}, {"I3", d.I3}};
}

inline nlohmann::json to_json(const RegularityReport& r) {
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& [n, norm] : r.refinement_ratios) ratios.push_back({{"n", n}, {"norm", norm}});
    return {{"s_nominal", r.s_nominal},
            {"slope_u0", r.slope_u0},
            {"slope_diff", r.slope_diff},
            {"gain_measured", r.gain_measured},
            {"gain_predicted", r.gain_predicted},
            {"zero_difference", r.zero_difference},
            {"refinement", ratios}};
}

inline nlohmann::json to_json(const SingularitySet& s) {
    return {{"points", s.points}, {"j", s.j}, {"eta", s.eta}};
}

inline nlohmann::json to_json(const UCReport& r) {
    return {{"a", r.a},
            {"b", r.b},
            {"A1", r.A1},
            {"A2", r.A2},
            {"A3", r.A3},
            {"A4", r.A4},
            {"dt_at_a", r.dt_at_a},
            {"dt_at_b", r.dt_at_b},
            {"identity_residual", r.identity_residual},
            {"verdict", to_string(r.verdict)},
            {"which_theorem", r.which_theorem},
            {"interval_deviation", r.interval_deviation},
            {"tolerance", r.tolerance},
            {"detail", r.detail}};
}

inline nlohmann::json to_json(const Thap3Construction& c) {
    return {{"c0", c.c0},      {"a", c.a},           {"b", c.b},    {"lambda0", c.lambda0},
            {"q_value", c.q_value}, {"q_v1", c.q_v1}, {"q_v2", c.q_v2},
            {"grid", to_json(c.v0.grid())}};
}

inline nlohmann::json to_json(const Tha3Construction& c) {
    return {{"c0", c.c0},
            {"a", c.a},
            {"b", c.b},
            {"alpha_target", c.alpha_target},
            {"beta_target", c.beta_target},
            {"alpha_achieved", c.alpha_achieved},
            {"beta_achieved", c.beta_achieved},
            {"residual_on_interval", c.residual_on_interval},
            {"dt_max_on_interval", c.dt_max_on_interval},
            {"plateau_level", c.plateau_level},
            {"grid", to_json(c.u0.grid())}};
}

} // namespace bbmlab
