#ifndef MOTORSIM_CONFIG_HPP
#define MOTORSIM_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "motorsim/params.hpp"
#include "motorsim/sde.hpp"
#include "motorsim/spring.hpp"

namespace motorsim {

/// Everything a run needs, loadable from a flat key=value file. Unknown keys
/// are errors (typo safety); '#' starts a comment. `preset = kinesin_invitro`
/// loads the bundled Table of in vitro constants before field overrides apply.
struct RunConfig {
    PhysicalParams params = kinesin_invitro();
    std::string spring = "linear";  // linear | wlc | custom(<file>)
    double wlc_contour = 70.0;      // nm
    std::string custom_spring_file;
    SimConfig sim;                  // sim.t_final == 0 means "auto, 10/epsilon"
    std::size_t gh_nodes = 64;
    double tol_quad = 1e-9;         // node-doubling acceptance for <g>
    std::size_t density_points = 16385;
    double regime_threshold = 0.1;
};

inline SpringLaw build_spring(const RunConfig& cfg) {
    if (cfg.spring == "linear") return SpringLaw::linear(cfg.params.spring_kappa);
    if (cfg.spring == "wlc")
        return SpringLaw::wormlike_chain(cfg.params.spring_kappa, cfg.wlc_contour);
    if (cfg.spring == "custom") {
        // Tabulated Phi' on a uniform xi grid: two columns "xi phi_prime".
        std::ifstream in(cfg.custom_spring_file);
        if (!in)
            throw std::runtime_error("build_spring: cannot open " +
                                     cfg.custom_spring_file);
        std::vector<double> xi, dphi;
        double a, b;
        while (in >> a >> b) {
            xi.push_back(a);
            dphi.push_back(b);
        }
        if (xi.size() < 3) throw std::runtime_error("build_spring: table too short");
        const double lo = xi.front(), hi = xi.back();
        const double h = (hi - lo) / static_cast<double>(xi.size() - 1);
        auto table_dphi = [xi, dphi, lo, h](double u) {
            if (u <= xi.front()) return dphi.front();
            if (u >= xi.back()) return dphi.back();
            const double pos = (u - lo) / h;
            const std::size_t k = std::min(static_cast<std::size_t>(pos), xi.size() - 2);
            const double w = pos - static_cast<double>(k);
            return (1.0 - w) * dphi[k] + w * dphi[k + 1];
        };
        // Phi by midpoint accumulation from 0 (sufficient for density work).
        auto table_phi = [table_dphi](double u) {
            const int steps = 400;
            double acc = 0.0;
            const double du = u / steps;
            for (int i = 0; i < steps; ++i)
                acc += table_dphi((i + 0.5) * du) * du;
            return acc;
        };
        return SpringLaw::general(cfg.params.spring_kappa, cfg.wlc_contour, table_phi,
                                  table_dphi);
    }
    throw std::runtime_error("build_spring: unknown spring kind '" + cfg.spring + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::runtime_error("config: bad numeric value for " + key + ": " + v);
    }
}

inline long long to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::runtime_error("config: bad integer value for " + key + ": " + v);
    }
}

}  // namespace detail

/// Apply one key=value override. Returns false if the key is unknown.
inline bool apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::to_double;
    using detail::to_int;
    PhysicalParams& p = cfg.params;
    SimConfig& s = cfg.sim;
    if (key == "preset") {
        if (value != "kinesin_invitro")
            throw std::runtime_error("config: unknown preset '" + value + "'");
        p = kinesin_invitro();
    } else if (key == "step_size_L") p.step_size_L = to_double(value, key);
    else if (key == "stall_force_Fstar") p.stall_force = to_double(value, key);
    else if (key == "free_velocity_v") p.free_velocity = to_double(value, key);
    else if (key == "v_max") p.max_velocity = to_double(value, key);
    else if (key == "v_min") p.min_velocity = to_double(value, key);
    else if (key == "spring_kappa") p.spring_kappa = to_double(value, key);
    else if (key == "motor_diffusion_sigma2") p.motor_diffusion = to_double(value, key);
    else if (key == "cargo_radius_a") p.bead_radius = to_double(value, key);
    else if (key == "viscosity_eta") p.viscosity = to_double(value, key);
    else if (key == "trap_force_theta") p.trap_force = to_double(value, key);
    else if (key == "kBT") p.kBT = to_double(value, key);
    else if (key == "motor_count_N") p.n_motors = static_cast<int>(to_int(value, key));
    else if (key == "spring") cfg.spring = value;
    else if (key == "wlc_contour") cfg.wlc_contour = to_double(value, key);
    else if (key == "custom_spring_file") cfg.custom_spring_file = value;
    else if (key == "dt") s.dt = to_double(value, key);
    else if (key == "t_final") s.t_final = to_double(value, key);
    else if (key == "burn_in") s.burn_in = to_double(value, key);
    else if (key == "n_replicas") s.n_replicas = static_cast<int>(to_int(value, key));
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(to_int(value, key));
    else if (key == "record_stride")
        s.record_stride = static_cast<std::size_t>(to_int(value, key));
    else if (key == "n_threads") s.n_threads = static_cast<int>(to_int(value, key));
    else if (key == "gh_nodes") cfg.gh_nodes = static_cast<std::size_t>(to_int(value, key));
    else if (key == "tol_quad") cfg.tol_quad = to_double(value, key);
    else if (key == "density_points")
        cfg.density_points = static_cast<std::size_t>(to_int(value, key));
    else if (key == "regime_threshold") cfg.regime_threshold = to_double(value, key);
    else return false;
    return true;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (!apply_config_entry(cfg, key, value))
            throw std::runtime_error("config: unknown key '" + key + "' (line " +
                                     std::to_string(lineno) + ")");
    }
    validate(cfg.params);
    return cfg;
}

/// Resolved key=value view for reproducibility headers.
inline std::vector<std::pair<std::string, std::string>> config_entries(
    const RunConfig& cfg) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const PhysicalParams& p = cfg.params;
    const SimConfig& s = cfg.sim;
    return {
        {"step_size_L", num(p.step_size_L)},
        {"stall_force_Fstar", num(p.stall_force)},
        {"free_velocity_v", num(p.free_velocity)},
        {"v_max", num(p.max_velocity)},
        {"v_min", num(p.min_velocity)},
        {"spring_kappa", num(p.spring_kappa)},
        {"motor_diffusion_sigma2", num(p.motor_diffusion)},
        {"cargo_radius_a", num(p.bead_radius)},
        {"viscosity_eta", num(p.viscosity)},
        {"trap_force_theta", num(p.trap_force)},
        {"kBT", num(p.kBT)},
        {"motor_count_N", std::to_string(p.n_motors)},
        {"spring", cfg.spring},
        {"wlc_contour", num(cfg.wlc_contour)},
        {"dt", num(s.dt)},
        {"t_final", num(s.t_final)},
        {"burn_in", num(s.burn_in)},
        {"n_replicas", std::to_string(s.n_replicas)},
        {"seed", std::to_string(s.seed)},
        {"record_stride", std::to_string(s.record_stride)},
        {"n_threads", std::to_string(s.n_threads)},
        {"gh_nodes", std::to_string(cfg.gh_nodes)},
        {"tol_quad", num(cfg.tol_quad)},
        {"density_points", std::to_string(cfg.density_points)},
        {"regime_threshold", num(cfg.regime_threshold)},
    };
}

}  // namespace motorsim

#endif
