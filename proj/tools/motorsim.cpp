// motorsim -- command-line front end for the experiment runners.
//
// Subcommands: fv1, visc-sweep, fv2, regime-panels, stall, density-dump.
// Exit code 0 only when every required assertion encoded in the selected
// experiment passes; 1 when an assertion fails; 2 on usage/runtime errors.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "motorsim/experiments.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

void print_report(const motorsim::ExperimentReport& rep) {
    for (const auto& a : rep.assertions) {
        const char* mark = a.pass ? "[PASS]" : (a.required ? "[FAIL]" : "[INFO]");
        std::printf("%s %s: %s\n", mark, a.name.c_str(), a.detail.c_str());
    }
    std::printf("%s: %s\n", rep.experiment.c_str(),
                rep.all_required_pass() ? "all required assertions passed"
                                        : "required assertion failures");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"motorsim: effective transport of cargo hauled by elastically coupled motors"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    double tol_quad = -1.0;
    int replicas = -1;
    auto* opt_seed = app.add_option("--seed", seed, "RNG seed (64-bit)");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory for CSV/JSON artifacts");
    app.add_option("--tol-quad", tol_quad, "relative quadrature tolerance");
    app.add_option("--replicas", replicas, "Monte Carlo replica count");

    double theta_min = -10.0, theta_max = 20.0;
    int theta_points = 21;
    bool dump_traj = false;
    auto* fv1 = app.add_subcommand("fv1", "one-motor force-velocity comparison");
    fv1->add_option("--theta-min", theta_min, "trap force grid start (pN)");
    fv1->add_option("--theta-max", theta_max, "trap force grid end (pN)");
    fv1->add_option("--theta-points", theta_points, "trap force grid size");
    fv1->add_flag("--dump-trajectories", dump_traj, "write sample trajectory CSVs");

    double gamma_min = 1e-5, gamma_max = 1e-2;
    int gamma_points = 13;
    auto* visc = app.add_subcommand("visc-sweep", "velocity vs cargo friction, one and two motors");
    visc->add_option("--gamma-min", gamma_min, "friction grid start (pN s/nm)");
    visc->add_option("--gamma-max", gamma_max, "friction grid end (pN s/nm)");
    visc->add_option("--gamma-points", gamma_points, "log-spaced grid size");

    double theta2_min = 0.0, theta2_max = 25.0;
    int theta2_points = 21;
    bool dump_traj2 = false;
    auto* fv2 = app.add_subcommand("fv2", "two-motor force-velocity and force-diffusivity curves");
    fv2->add_option("--theta-min", theta2_min, "trap force grid start (pN)");
    fv2->add_option("--theta-max", theta2_max, "trap force grid end (pN)");
    fv2->add_option("--theta-points", theta2_points, "trap force grid size");
    fv2->add_flag("--dump-trajectories", dump_traj2, "write sample trajectory CSVs");

    double theta3_min = 0.0, theta3_max = 25.0;
    int theta3_points = 21;
    auto* panels = app.add_subcommand("regime-panels",
                                      "two-motor panels at gamma = 1e-3 and 1e-2 pN s/nm");
    panels->add_option("--theta-min", theta3_min, "trap force grid start (pN)");
    panels->add_option("--theta-max", theta3_max, "trap force grid end (pN)");
    panels->add_option("--theta-points", theta3_points, "trap force grid size");

    auto* stall = app.add_subcommand("stall", "stall forces from the averaged theory");

    std::string density_kind = "pi_y";
    std::string cargo_mode_name = "fluctuating";
    std::string motors_csv;
    auto* dens = app.add_subcommand("density-dump", "stationary densities on a grid");
    dens->add_option("--density", density_kind, "pi_y | pi_r | cargo");
    dens->add_option("--cargo-mode", cargo_mode_name, "fixed | fluctuating (pi_r only)");
    dens->add_option("--motors", motors_csv,
                     "comma-separated motor positions in units of length_ref (cargo only)");

    for (auto* sub : {fv1, visc, fv2, panels, stall, dens})
        sub->fallthrough();  // allow global flags after the subcommand

    CLI11_PARSE(app, argc, argv);

    try {
        motorsim::RunConfig cfg;
        if (!config_path.empty()) cfg = motorsim::load_config(config_path);
        if (opt_seed->count() > 0) cfg.sim.seed = seed;
        if (tol_quad > 0.0) cfg.tol_quad = tol_quad;
        if (replicas > 0) cfg.sim.n_replicas = replicas;
        motorsim::validate(cfg.params);  // sim config is validated per run once
                                         // the horizon default is resolved

        motorsim::ExperimentReport rep;
        if (fv1->parsed()) {
            motorsim::SweepOptions opt;
            opt.theta_grid_pn = motorsim::detail::linspace(theta_min, theta_max, theta_points);
            opt.dump_trajectories = dump_traj;
            rep = motorsim::run_force_velocity_one(cfg, out_dir, opt);
        } else if (visc->parsed()) {
            motorsim::SweepOptions opt;
            opt.gamma_grid = motorsim::detail::logspace(gamma_min, gamma_max, gamma_points);
            rep = motorsim::run_viscosity_sweep(cfg, out_dir, opt);
        } else if (fv2->parsed()) {
            motorsim::SweepOptions opt;
            opt.theta_grid_pn = motorsim::detail::linspace(theta2_min, theta2_max, theta2_points);
            opt.dump_trajectories = dump_traj2;
            rep = motorsim::run_two_motor_curves(cfg, out_dir, opt);
        } else if (panels->parsed()) {
            motorsim::SweepOptions opt;
            opt.theta_grid_pn = motorsim::detail::linspace(theta3_min, theta3_max, theta3_points);
            rep = motorsim::run_regime_panels(cfg, out_dir, opt);
        } else if (stall->parsed()) {
            rep = motorsim::run_stall(cfg, out_dir);
        } else if (dens->parsed()) {
            motorsim::DensityDumpOptions opt;
            opt.kind = density_kind;
            if (cargo_mode_name == "fixed")
                opt.cargo_mode = motorsim::CargoMode::Fixed;
            else if (cargo_mode_name == "fluctuating")
                opt.cargo_mode = motorsim::CargoMode::Fluctuating;
            else
                throw std::invalid_argument("unknown cargo mode: " + cargo_mode_name);
            if (!motors_csv.empty()) opt.motor_positions = parse_double_list(motors_csv);
            rep = motorsim::run_density_dump(cfg, out_dir, opt);
        }

        print_report(rep);
        return rep.all_required_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
