#ifndef MOTORSIM_SDE_HPP
#define MOTORSIM_SDE_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "motorsim/force_velocity.hpp"
#include "motorsim/nondim.hpp"
#include "motorsim/params.hpp"
#include "motorsim/spring.hpp"

namespace motorsim {

/// Integration controls. Times are in the fast nondimensional clock t~
/// (cargo relaxation is O(1) there), so dt = 0.01 resolves the stiff scale
/// with ~100 steps per relaxation time.
struct SimConfig {
    double dt = 0.01;
    double t_final = 0.0;           // required; 10/epsilon is the usual choice
    double burn_in = 0.1;           // discarded initial fraction, in [0, 1)
    int n_replicas = 64;
    std::uint64_t seed = 20260814;
    std::size_t record_stride = 100;
    std::vector<double> initial_state;  // optional: X1..XN, Z
    int n_threads = 0;              // 0 = hardware concurrency
    bool cargo_thermal_noise = true;    // disable for deterministic-limit checks
};

inline void validate(const SimConfig& c) {
    if (!(c.dt > 0.0) || c.dt > 0.05 + 1e-15)
        throw std::invalid_argument("SimConfig: need 0 < dt <= 0.05");
    if (!(c.t_final > 0.0)) throw std::invalid_argument("SimConfig: t_final required");
    if (!(c.burn_in >= 0.0) || c.burn_in >= 1.0)
        throw std::invalid_argument("SimConfig: burn_in must be in [0, 1)");
    if (c.n_replicas < 1) throw std::invalid_argument("SimConfig: n_replicas >= 1");
    if (c.record_stride < 1) throw std::invalid_argument("SimConfig: record_stride >= 1");
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Replica streams are a pure function of (seed, replica), so results do not
/// depend on scheduling or thread count.
inline std::uint64_t replica_key(std::uint64_t seed, int replica) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(replica) + 1));
}

}  // namespace detail

struct ReplicaPath {
    std::vector<std::vector<double>> motors;  // [motor][frame]
    std::vector<double> cargo;                // [frame]
    std::uint64_t rng_key = 0;
};

struct TrajectoryEnsemble {
    std::vector<double> t;  // shared fast-time stamps, t[0] = 0
    std::vector<ReplicaPath> replicas;
    DimensionlessGroups groups;
    SimConfig config;
    int n_motors = 1;
};

/// Long-run transport estimates from replica endpoint displacements of the
/// tracked coordinate (the motor mean; the midpoint M for N=2).
struct TransportSummary {
    double v_slow = 0.0, v_se_slow = 0.0;
    double d_slow = 0.0, d_se_slow = 0.0;
    double v_nm_s = 0.0, v_se_nm_s = 0.0;
    double d_nm2_s = 0.0, d_se_nm2_s = 0.0;
    double window_fast = 0.0;  // post-burn-in span in t~
    int n_replicas = 0;        // effective sample size for the estimates
    bool d_se_valid = false;   // requires >= 8 replicas
    Regime regime = Regime::DiffusionDominated;
    std::vector<double> displacements;  // per-replica, dimensionless
};

/// Euler-Maruyama integration of the nondimensional fast-time system
///   dX_i = eps g(s f_i(X_i - Z)) dt~ + sqrt(eps rho) dW_i
///   dZ   = [sum_i f_i(X_i - Z) - theta~] dt~ + dW_z
/// where f_i is the nondimensional spring force (identity for linear laws).
/// `forces` empty means linear springs for every motor. `y_limit` guards the
/// domain of constrained laws (wormlike chain): |X_i - Z| must stay below it.
inline TrajectoryEnsemble integrate_groups(
    const ForceVelocityCurve& curve, const DimensionlessGroups& groups,
    const SimConfig& cfg,
    const std::vector<std::function<double(double)>>& forces = {},
    double y_limit = std::numeric_limits<double>::infinity()) {
    validate(cfg);
    const int N = groups.n_motors;
    if (N < 1) throw std::invalid_argument("integrate_groups: n_motors >= 1");
    if (!forces.empty() && static_cast<int>(forces.size()) != N)
        throw std::invalid_argument("integrate_groups: forces size mismatch");
    if (!cfg.initial_state.empty() &&
        cfg.initial_state.size() != static_cast<std::size_t>(N) + 1)
        throw std::invalid_argument("integrate_groups: initial state needs N+1 entries");

    const std::size_t n_steps =
        static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
    if (n_steps == 0) throw std::invalid_argument("integrate_groups: horizon < dt");

    TrajectoryEnsemble ens;
    ens.groups = groups;
    ens.config = cfg;
    ens.n_motors = N;
    for (std::size_t k = 0; k <= n_steps; k += cfg.record_stride)
        ens.t.push_back(static_cast<double>(k) * cfg.dt);
    if ((n_steps % cfg.record_stride) != 0)
        ens.t.push_back(static_cast<double>(n_steps) * cfg.dt);
    const std::size_t n_frames = ens.t.size();
    ens.replicas.resize(cfg.n_replicas);

    const double eps = groups.epsilon;
    const double s = groups.s;
    const double theta = groups.theta_tilde;
    const double dt = cfg.dt;
    const double sqrt_motor = std::sqrt(eps * groups.rho * dt);
    const double sqrt_cargo = cfg.cargo_thermal_noise ? std::sqrt(dt) : 0.0;
    const bool linear = forces.empty();

    auto run_replica = [&](int r) {
        ReplicaPath& path = ens.replicas[r];
        path.rng_key = detail::replica_key(cfg.seed, r);
        std::mt19937_64 rng(path.rng_key);
        std::normal_distribution<double> normal(0.0, 1.0);

        std::vector<double> X(N, 0.0);
        double Z = -theta / static_cast<double>(N);
        if (!cfg.initial_state.empty()) {
            for (int i = 0; i < N; ++i) X[i] = cfg.initial_state[i];
            Z = cfg.initial_state[N];
        }

        path.motors.assign(N, std::vector<double>(n_frames, 0.0));
        path.cargo.assign(n_frames, 0.0);
        std::size_t frame = 0;
        auto record = [&](std::size_t step, std::size_t at) {
            (void)step;
            for (int i = 0; i < N; ++i) path.motors[i][at] = X[i];
            path.cargo[at] = Z;
        };
        record(0, frame++);

        for (std::size_t k = 1; k <= n_steps; ++k) {
            double cargo_drift = -theta;
            if (linear) {
                for (int i = 0; i < N; ++i) {
                    const double y = X[i] - Z;
                    cargo_drift += y;
                    X[i] += eps * curve(s * y) * dt + sqrt_motor * normal(rng);
                }
            } else {
                for (int i = 0; i < N; ++i) {
                    const double y = X[i] - Z;
                    if (!(std::abs(y) < y_limit))
                        throw std::runtime_error(
                            "integrate_groups: replica " + std::to_string(r) +
                            " left the spring domain at step " + std::to_string(k) +
                            " (|X-Z| = " + std::to_string(std::abs(y)) + ")");
                    const double f = forces[i](y);
                    cargo_drift += f;
                    X[i] += eps * curve(s * f) * dt + sqrt_motor * normal(rng);
                }
            }
            Z += cargo_drift * dt + sqrt_cargo * normal(rng);
            if (!std::isfinite(Z))
                throw std::runtime_error("integrate_groups: non-finite state in replica " +
                                         std::to_string(r) + " at step " +
                                         std::to_string(k) + " (t~ = " +
                                         std::to_string(k * dt) + ")");
            if (k % cfg.record_stride == 0 || k == n_steps) record(k, frame++);
        }
    };

    int n_threads = cfg.n_threads > 0
                        ? cfg.n_threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, cfg.n_replicas);
    if (n_threads == 1) {
        for (int r = 0; r < cfg.n_replicas; ++r) run_replica(r);
    } else {
        std::atomic<int> next{0};
        std::mutex err_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int tix = 0; tix < n_threads; ++tix) {
            pool.emplace_back([&]() {
                for (;;) {
                    const int r = next.fetch_add(1);
                    if (r >= cfg.n_replicas) return;
                    try {
                        run_replica(r);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return ens;
}

/// Dimensional entry point: nondimensionalizes and integrates. General laws
/// supply the nondimensional per-motor force lambda^{-1} Phi'(lambda y).
inline TrajectoryEnsemble integrate_system(const PhysicalParams& p,
                                           const ForceVelocityCurve& curve,
                                           const SpringLaw& law, const SimConfig& cfg) {
    const DimensionlessGroups groups = compute_groups(p, law);
    if (law.kind() == SpringLaw::Kind::Linear)
        return integrate_groups(curve, groups, cfg);
    const double lambda = groups.lambda;
    std::vector<std::function<double(double)>> forces(
        p.n_motors, [&law, lambda](double y) { return law.dphi(lambda * y) / lambda; });
    double y_limit = std::numeric_limits<double>::infinity();
    if (std::isfinite(law.contour_length()))
        y_limit = law.contour_length() / (groups.length_ref);
    return integrate_groups(curve, groups, cfg, forces, y_limit);
}

inline TrajectoryEnsemble integrate_system(const PhysicalParams& p,
                                           const ForceVelocityCurve& curve,
                                           const SimConfig& cfg) {
    return integrate_system(p, curve, SpringLaw::linear(p.spring_kappa), cfg);
}

/// Mean of the motor coordinates at one recorded frame.
inline double tracked_coordinate(const ReplicaPath& path, int n_motors,
                                 std::size_t frame) {
    double acc = 0.0;
    for (int i = 0; i < n_motors; ++i) acc += path.motors[i][frame];
    return acc / static_cast<double>(n_motors);
}

inline TransportSummary estimate_transport(const TrajectoryEnsemble& ens) {
    const DimensionlessGroups& g = ens.groups;
    if (!(g.epsilon > 0.0))
        throw std::invalid_argument("estimate_transport: needs epsilon > 0");
    const std::size_t n_frames = ens.t.size();
    if (n_frames < 2) throw std::invalid_argument("estimate_transport: no frames");

    const double burn_time = ens.config.burn_in * ens.t.back();
    std::size_t b = 0;
    while (b + 1 < n_frames && ens.t[b] < burn_time) ++b;
    const double window = ens.t.back() - ens.t[b];
    if (!(window >= 100.0))
        throw std::invalid_argument(
            "estimate_transport: post-burn-in window must cover >= 100 fast time "
            "units (have " +
            std::to_string(window) + ")");

    TransportSummary out;
    out.window_fast = window;
    out.n_replicas = static_cast<int>(ens.replicas.size());
    out.regime = regime_classify(g);

    const double slow_window = g.epsilon * window;
    const int R = out.n_replicas;
    out.displacements.reserve(R);
    double sum_v = 0.0;
    for (const ReplicaPath& rp : ens.replicas) {
        const double disp = tracked_coordinate(rp, ens.n_motors, n_frames - 1) -
                            tracked_coordinate(rp, ens.n_motors, b);
        out.displacements.push_back(disp);
        sum_v += disp / slow_window;
    }
    out.v_slow = sum_v / R;
    if (R >= 2) {
        double ss = 0.0;
        for (double d : out.displacements) {
            const double dv = d / slow_window - out.v_slow;
            ss += dv * dv;
        }
        out.v_se_slow = std::sqrt(ss / (R - 1) / R);
    }

    // Diffusivity from the spread of endpoint displacements; jackknife SE.
    if (R >= 2) {
        double mean_d = 0.0;
        for (double d : out.displacements) mean_d += d;
        mean_d /= R;
        double var = 0.0;
        for (double d : out.displacements) var += (d - mean_d) * (d - mean_d);
        var /= (R - 1);
        out.d_slow = var / (2.0 * slow_window);
        if (R >= 8) {
            std::vector<double> loo(R);
            for (int i = 0; i < R; ++i) {
                double m = 0.0;
                for (int j = 0; j < R; ++j)
                    if (j != i) m += out.displacements[j];
                m /= (R - 1);
                double v = 0.0;
                for (int j = 0; j < R; ++j)
                    if (j != i) v += (out.displacements[j] - m) * (out.displacements[j] - m);
                v /= (R - 2);
                loo[i] = v / (2.0 * slow_window);
            }
            double jm = 0.0;
            for (double x : loo) jm += x;
            jm /= R;
            double jss = 0.0;
            for (double x : loo) jss += (x - jm) * (x - jm);
            out.d_se_slow = std::sqrt(jss * (R - 1) / R);
            out.d_se_valid = true;
        }
    }

    out.v_nm_s = velocity_to_nm_s(out.v_slow, g);
    out.v_se_nm_s = velocity_to_nm_s(out.v_se_slow, g);
    out.d_nm2_s = diffusion_to_nm2_s(out.d_slow, g);
    out.d_se_nm2_s = diffusion_to_nm2_s(out.d_se_slow, g);
    return out;
}

/// Pooled post-burn-in samples of X_i - Z (all motors, all replicas).
inline std::vector<double> separation_samples(const TrajectoryEnsemble& ens,
                                              double skip_fraction = 0.1) {
    std::vector<double> out;
    const std::size_t n_frames = ens.t.size();
    const double burn_time = skip_fraction * ens.t.back();
    for (const ReplicaPath& rp : ens.replicas)
        for (std::size_t k = 0; k < n_frames; ++k) {
            if (ens.t[k] < burn_time) continue;
            for (int i = 0; i < ens.n_motors; ++i)
                out.push_back(rp.motors[i][k] - rp.cargo[k]);
        }
    return out;
}

/// Pooled post-burn-in samples of the two-motor separation R = X1 - X2.
inline std::vector<double> pair_separation_samples(const TrajectoryEnsemble& ens,
                                                   double skip_fraction = 0.1) {
    if (ens.n_motors != 2)
        throw std::invalid_argument("pair_separation_samples: needs N = 2");
    std::vector<double> out;
    const std::size_t n_frames = ens.t.size();
    const double burn_time = skip_fraction * ens.t.back();
    for (const ReplicaPath& rp : ens.replicas)
        for (std::size_t k = 0; k < n_frames; ++k) {
            if (ens.t[k] < burn_time) continue;
            out.push_back(rp.motors[0][k] - rp.motors[1][k]);
        }
    return out;
}

}  // namespace motorsim

#endif
