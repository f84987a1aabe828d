#ifndef MOTORSIM_AVERAGING_HPP
#define MOTORSIM_AVERAGING_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "motorsim/density.hpp"
#include "motorsim/force_velocity.hpp"
#include "motorsim/nondim.hpp"
#include "motorsim/quadrature.hpp"

namespace motorsim {

/// ---------------------------------------------------------------- one motor

struct GaussAverage {
    double value = 0.0;
    bool converged = true;    // node-doubling agreement within tol
    double node_delta = 0.0;  // |value_n - value_2n|
};

/// <g>(mean, variance): Gaussian smearing of the force-velocity curve with a
/// node-doubling self-check.
inline GaussAverage gaussian_average_checked(const ForceVelocityCurve& g, double mean,
                                             double variance, std::size_t n_nodes = 64,
                                             double tol = 1e-9) {
    GaussAverage out;
    auto f = [&](double x) { return g(x); };
    out.value = gauss_expectation(f, mean, variance, n_nodes);
    const double v2 = gauss_expectation(f, mean, variance, 2 * n_nodes);
    out.node_delta = std::abs(out.value - v2);
    out.converged = out.node_delta <= tol;
    return out;
}

inline double gaussian_average(const ForceVelocityCurve& g, double mean, double variance,
                               std::size_t n_nodes = 64) {
    return gaussian_average_checked(g, mean, variance, n_nodes).value;
}

struct OneMotorAveraged {
    double v = 0.0;  // slow-time velocity in units of the free velocity v
    double d = 0.0;  // slow-time diffusivity, = rho/2 for a single motor
    bool quad_converged = true;
    double quad_delta = 0.0;
};

/// Low-viscosity (epsilon -> 0) reduction for one motor: the cargo relaxes to
/// its Gaussian quasi-stationary shape around the motor, so the drift is the
/// curve averaged over N(s theta~, s^2/2); the diffusivity is bare.
inline OneMotorAveraged one_motor_averaged(const ForceVelocityCurve& g,
                                           const DimensionlessGroups& gr,
                                           std::size_t n_nodes = 64) {
    OneMotorAveraged out;
    const GaussAverage a = gaussian_average_checked(
        g, gr.s * gr.theta_tilde, 0.5 * gr.s * gr.s, n_nodes);
    out.v = a.value;
    out.d = 0.5 * gr.rho;
    out.quad_converged = a.converged;
    out.quad_delta = a.node_delta;
    return out;
}

/// Deterministic linear-response closed form v (1 - theta/F*) / (1 + gamma v / F*),
/// nondimensionalized: (1 - s theta~) / (1 + eps s). Only asserted for loads
/// up to the stall force on either side.
inline double one_motor_linear_approx(const DimensionlessGroups& gr) {
    if (std::abs(gr.theta_over_fstar()) > 1.0 + 1e-12)
        throw std::domain_error("one_motor_linear_approx: |theta| beyond F*");
    return (1.0 - gr.s * gr.theta_tilde) / (1.0 + gr.epsilon * gr.s);
}

/// Moments of pi_Y when the curve is exactly linear (used as an oracle:
/// completing the square makes the stationary density Gaussian).
struct GaussianMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline GaussianMoments linear_g_pi_Y_moments(const DimensionlessGroups& gr) {
    GaussianMoments m;
    m.mean = (gr.theta_tilde + gr.epsilon) / (1.0 + gr.epsilon * gr.s);
    m.variance = (1.0 + gr.epsilon * gr.rho) / (2.0 * (1.0 + gr.epsilon * gr.s));
    return m;
}

/// Stationary density of the separation Y = X - Z for a single motor. Exact
/// at every epsilon:
///   pi_Y(y) ∝ exp{ [-(y - theta~)^2 + 2 eps ∫_0^y g(s y') dy'] / (1 + eps rho) }.
inline StationaryDensity1D pi_Y_density(const ForceVelocityCurve& g,
                                        const DimensionlessGroups& gr,
                                        std::size_t n_points = 4097) {
    const double denom = 1.0 + gr.epsilon * gr.rho;
    auto logf = [&](double y) {
        const double tilt =
            (gr.epsilon == 0.0)
                ? 0.0
                : adaptive_simpson([&](double u) { return g(gr.s * u); }, 0.0, y, 1e-12);
        const double dy = y - gr.theta_tilde;
        return (-dy * dy + 2.0 * gr.epsilon * tilt) / denom;
    };
    const GaussianMoments guess = linear_g_pi_Y_moments(gr);
    const double half = 8.0 * std::sqrt(std::max(guess.variance, 0.25));
    return detail::build_density_window(logf, guess.mean, half, n_points);
}

struct OneMotorExact {
    StationaryDensity1D pi_Y;
    double v = 0.0;           // ∫ g(s y) pi_Y(y) dy, units of free velocity
    double v_identity = 0.0;  // (E[Y] - theta~) / eps, must agree with v
    double consistency = 0.0; // |v - v_identity| relative to max(|v|, 1e-12)
};

/// Exact stationary one-motor velocity at arbitrary viscosity, with the
/// force-balance identity  v = (E[Y] - theta~)/eps  as an internal check.
inline OneMotorExact one_motor_exact(const ForceVelocityCurve& g,
                                     const DimensionlessGroups& gr,
                                     std::size_t n_points = 4097) {
    if (!(gr.epsilon > 0.0))
        throw std::invalid_argument("one_motor_exact: needs epsilon > 0");
    OneMotorExact out;
    out.pi_Y = pi_Y_density(g, gr, n_points);
    out.v = out.pi_Y.expectation([&](double y) { return g(gr.s * y); });
    out.v_identity = (out.pi_Y.mean() - gr.theta_tilde) / gr.epsilon;
    out.consistency =
        std::abs(out.v - out.v_identity) / std::max(std::abs(out.v), 1e-12);
    return out;
}

/// --------------------------------------------------------------- two motors

enum class CargoMode { Fixed, Fluctuating };

/// Separation-dependent drift of motor 1 when two identical motors sit at
/// separation r = x1 - x2 under trap load theta~. Fixed cargo pins Z at the
/// force-balance point; fluctuating cargo smears the argument over the
/// quasi-stationary cargo Gaussian (variance 1/(2N) = 1/4).
inline std::function<double(double)> make_pair_drift(const ForceVelocityCurve& g,
                                                     const DimensionlessGroups& gr,
                                                     CargoMode mode,
                                                     std::size_t n_nodes = 64) {
    const double s = gr.s;
    const double theta = gr.theta_tilde;
    if (mode == CargoMode::Fixed) {
        return [&g, s, theta](double r) { return g(0.5 * s * (r + theta)); };
    }
    return [&g, s, theta, n_nodes](double r) {
        return gauss_expectation([&g](double x) { return g(x); },
                                 0.5 * s * (r + theta), 0.25 * s * s, n_nodes);
    };
}

/// Effective single-argument drift G(u): G_fixed(u) = g(-s u / 2),
/// G_fluct(u) = <g>(-s u / 2, s^2 / 4). The pair drift above is G(-r - theta~).
inline std::function<double(double)> make_effective_G(const ForceVelocityCurve& g,
                                                      const DimensionlessGroups& gr,
                                                      CargoMode mode,
                                                      std::size_t n_nodes = 64) {
    const double s = gr.s;
    if (mode == CargoMode::Fixed)
        return [&g, s](double u) { return g(-0.5 * s * u); };
    return [&g, s, n_nodes](double u) {
        return gauss_expectation([&g](double x) { return g(x); }, -0.5 * s * u,
                                 0.25 * s * s, n_nodes);
    };
}

struct TwoMotorReduction {
    StationaryDensity1D pi_R;
    double v2 = 0.0;             // slow-time pair velocity, units of v
    double d2 = 0.0;             // slow-time pair diffusivity
    double d2_bare = 0.0;        // rho/4 contribution
    double d2_configuration = 0.0;  // separation-dynamics contribution
    double g_minus_slope0 = 0.0; // dG_-/dr at r = 0 (effective spring constant)
};

/// Stationary reduction of the two-motor system on the slow time scale.
/// The separation R = X1 - X2 relaxes with drift -G_-(r) and noise 2 rho; the
/// midpoint M advances at G_+(R)/2 with noise rho/2. pi_R is even in r by the
/// exchange symmetry of identical motors, so it is built on the right half
/// and mirrored, which keeps the evenness exact in floating point.
///
/// `pair_drift` is r -> drift of motor 1 (trap already baked in).
inline TwoMotorReduction two_motor_reduction(
    const std::function<double(double)>& pair_drift, const DimensionlessGroups& gr,
    std::size_t n_points = 16385, double drop = 40.0) {
    if (!(gr.rho > 0.0))
        throw std::invalid_argument("two_motor_reduction: needs rho > 0");
    if (n_points % 2 == 0) ++n_points;

    // Effective curvature of the separation potential at the origin.
    const double dr = 1e-4;
    const double slope =
        ((pair_drift(dr) - pair_drift(-dr)) - (pair_drift(-dr) - pair_drift(dr))) /
        (2.0 * dr);  // = 2 b'(0), b(r) = H(r) - H(-r)
    const double kappa_eff = std::max(-slope, 1e-6);
    double half = std::max(10.0 * std::sqrt(gr.rho / kappa_eff), 10.0);

    TwoMotorReduction out;
    out.g_minus_slope0 = kappa_eff;

    std::vector<double> grid, logp, gplus;
    for (int attempt = 0; attempt < 12; ++attempt) {
        const std::size_t n = n_points;
        const std::size_t c = (n - 1) / 2;
        const double h = 2.0 * half / static_cast<double>(n - 1);
        grid.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            grid[i] = (static_cast<double>(i) - static_cast<double>(c)) * h;
        grid[c] = 0.0;

        std::vector<double> Hv(n);
        for (std::size_t i = 0; i < n; ++i) Hv[i] = pair_drift(grid[i]);

        // b(r) = H(r) - H(-r) is odd on the mirrored grid by construction.
        std::vector<double> b_right(c + 1);
        for (std::size_t k = 0; k <= c; ++k) b_right[k] = Hv[c + k] - Hv[c - k];
        const std::vector<double> W = cumulative_simpson_values(b_right, h);

        logp.assign(n, 0.0);
        for (std::size_t k = 0; k <= c; ++k) {
            const double lp = W[k] / gr.rho;  // log pi up to the normalizer
            logp[c + k] = lp;
            logp[c - k] = lp;
        }
        gplus.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) gplus[i] = Hv[i] + Hv[n - 1 - i];

        const double peak = *std::max_element(logp.begin(), logp.end());
        if (peak - logp.front() >= drop && peak - logp.back() >= drop) break;
        half *= 1.6;
        if (attempt == 11)
            throw std::runtime_error("two_motor_reduction: window failed to close");
    }

    out.pi_R = StationaryDensity1D(grid, logp);
    const std::vector<double>& pi = out.pi_R.values();
    const double h = out.pi_R.spacing();
    const std::size_t n = pi.size();

    // V2 and the diffusivity share one cumulative scheme so the centered flux
    // integral vanishes identically at the right edge.
    std::vector<double> drift_w(n), mass_w(n);
    for (std::size_t i = 0; i < n; ++i) {
        drift_w[i] = 0.5 * gplus[i] * pi[i];
        mass_w[i] = pi[i];
    }
    const std::vector<double> S = cumulative_simpson_values(drift_w, h);
    const std::vector<double> M = cumulative_simpson_values(mass_w, h);
    out.v2 = S.back() / M.back();

    std::vector<double> corr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double psi = S[i] - out.v2 * M[i];
        corr[i] = psi * psi / (gr.rho * pi[i]);
    }
    out.d2_bare = 0.25 * gr.rho;
    out.d2_configuration = simpson_uniform(corr, h);
    out.d2 = out.d2_bare + out.d2_configuration;
    return out;
}

inline TwoMotorReduction two_motor_reduction(const ForceVelocityCurve& g,
                                             const DimensionlessGroups& gr,
                                             CargoMode mode,
                                             std::size_t n_points = 16385) {
    return two_motor_reduction(make_pair_drift(g, gr, mode), gr, n_points);
}

/// Stationary separation density alone (normalized).
inline StationaryDensity1D pi_R_density(const ForceVelocityCurve& g,
                                        const DimensionlessGroups& gr, CargoMode mode,
                                        std::size_t n_points = 16385) {
    return two_motor_reduction(g, gr, mode, n_points).pi_R;
}

/// Effective drift of the leading/trailing motor pair as a single-argument
/// function of u: the motor-1 drift at separation r under load theta~ is
/// G(-r - theta~).
inline double G_fixed_cargo(const ForceVelocityCurve& g, double r, double s) {
    return g(-0.5 * s * r);
}

inline double G_fluctuating_cargo(const ForceVelocityCurve& g, double r, double s,
                                  std::size_t n_nodes = 64) {
    return gauss_expectation([&g](double x) { return g(x); }, -0.5 * s * r,
                             0.25 * s * s, n_nodes);
}

/// Reduction driven by a caller-supplied single-argument G (theta~ passed
/// explicitly; groups.theta_tilde is ignored in favor of the argument).
inline TwoMotorReduction two_motor_reduction_from_G(
    const std::function<double(double)>& G, const DimensionlessGroups& gr,
    double theta_tilde, std::size_t n_points = 16385) {
    auto pair_drift = [&G, theta_tilde](double r) { return G(-r - theta_tilde); };
    return two_motor_reduction(pair_drift, gr, n_points);
}

inline StationaryDensity1D pi_R_density(const std::function<double(double)>& G,
                                        const DimensionlessGroups& gr,
                                        double theta_tilde,
                                        std::size_t n_points = 16385) {
    return two_motor_reduction_from_G(G, gr, theta_tilde, n_points).pi_R;
}

/// ----------------------------------------------- transport-result wrappers

/// Uniform result shape for the reduced-model transport quantities, with the
/// dimensional values alongside the slow-time dimensionless ones.
struct EffectiveTransport {
    double v_slow = 0.0;
    double v_nm_s = 0.0;
    double d_slow = 0.0;
    double d_nm2_s = 0.0;
    Regime regime = Regime::DiffusionDominated;
    double quad_error = 0.0;
    bool quad_converged = true;
};

inline EffectiveTransport one_motor_velocity_low_visc(const ForceVelocityCurve& g,
                                                      const DimensionlessGroups& gr,
                                                      std::size_t n_nodes = 64) {
    const OneMotorAveraged a = one_motor_averaged(g, gr, n_nodes);
    EffectiveTransport t;
    t.v_slow = a.v;
    t.v_nm_s = velocity_to_nm_s(a.v, gr);
    t.d_slow = a.d;
    t.d_nm2_s = diffusion_to_nm2_s(a.d, gr);
    t.regime = regime_classify(gr);
    t.quad_error = a.quad_delta;
    t.quad_converged = a.quad_converged;
    return t;
}

inline EffectiveTransport one_motor_velocity_exact(const ForceVelocityCurve& g,
                                                   const DimensionlessGroups& gr,
                                                   std::size_t n_points = 4097) {
    const OneMotorExact e = one_motor_exact(g, gr, n_points);
    EffectiveTransport t;
    t.v_slow = e.v;
    t.v_nm_s = velocity_to_nm_s(e.v, gr);
    t.regime = regime_classify(gr);
    t.quad_error = e.consistency;
    t.quad_converged = e.consistency <= 1e-6;
    return t;
}

inline EffectiveTransport two_motor_velocity(const std::function<double(double)>& G,
                                             const DimensionlessGroups& gr,
                                             double theta_tilde,
                                             std::size_t n_points = 16385) {
    const TwoMotorReduction red = two_motor_reduction_from_G(G, gr, theta_tilde, n_points);
    EffectiveTransport t;
    t.v_slow = red.v2;
    t.v_nm_s = velocity_to_nm_s(red.v2, gr);
    t.d_slow = red.d2;
    t.d_nm2_s = diffusion_to_nm2_s(red.d2, gr);
    t.regime = regime_classify(gr);
    return t;
}

inline EffectiveTransport two_motor_diffusivity(const std::function<double(double)>& G,
                                                const DimensionlessGroups& gr,
                                                double theta_tilde,
                                                std::size_t n_points = 16385) {
    return two_motor_velocity(G, gr, theta_tilde, n_points);
}

/// ------------------------------------------------------------- stall forces

struct StallResult {
    double theta_tilde_star = 0.0;  // root of V(theta~) in trap-force units
    double theta_star_pn = 0.0;     // same in pN (meaningful for real groups)
    int iterations = 0;
    bool monotone = true;   // velocity decreasing across the bracket (16 probes)
    std::string note;       // locator of the first non-monotone probe, if any
};

/// Bisection for theta~* = min{theta~ : V(theta~) <= 0} on a user bracket.
/// The bracket must straddle the root; the velocity is assumed monotone and
/// that assumption is spot-checked at 16 interior points (violations flag the
/// result, they do not abort it).
inline StallResult stall_force(const std::function<double(double)>& velocity,
                               double theta_lo, double theta_hi,
                               double force_ref = 1.0) {
    if (!(theta_hi > theta_lo)) throw std::invalid_argument("stall_force: bad bracket");
    const double v_lo = velocity(theta_lo);
    const double v_hi = velocity(theta_hi);
    if (!(v_lo > 0.0) || !(v_hi < 0.0))
        throw std::invalid_argument(
            "stall_force: bracket invalid (need V(lo) > 0 > V(hi))");

    StallResult out;
    double prev = v_lo;
    for (int k = 1; k <= 16; ++k) {
        const double th = theta_lo + (theta_hi - theta_lo) * k / 17.0;
        const double vk = velocity(th);
        if (vk > prev + 1e-12 && out.note.empty()) {
            out.monotone = false;
            out.note = "velocity increases near theta~ = " + std::to_string(th);
        }
        prev = vk;
    }

    double lo = theta_lo, hi = theta_hi;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (velocity(mid) > 0.0 ? lo : hi) = mid;
        if (++out.iterations > 200) break;
    }
    out.theta_tilde_star = 0.5 * (lo + hi);
    out.theta_star_pn = out.theta_tilde_star * force_ref;
    return out;
}

/// Load at which the averaged one-motor velocity crosses zero. Default
/// bracket [0, 2/s].
inline StallResult stall_force_one_motor(const ForceVelocityCurve& g,
                                         const DimensionlessGroups& gr) {
    auto vel = [&](double theta) {
        return gaussian_average(g, gr.s * theta, 0.5 * gr.s * gr.s);
    };
    return stall_force(vel, 0.0, 2.0 / gr.s, gr.force_ref);
}

/// Load at which the averaged two-motor velocity crosses zero. Default
/// bracket [0, 4/s].
inline StallResult stall_force_two_motor(const ForceVelocityCurve& g,
                                         const DimensionlessGroups& gr, CargoMode mode,
                                         std::size_t n_points = 8193) {
    auto vel = [&](double theta) {
        DimensionlessGroups loaded = gr;
        loaded.theta_tilde = theta;
        return two_motor_reduction(g, loaded, mode, n_points).v2;
    };
    return stall_force(vel, 0.0, 4.0 / gr.s, gr.force_ref);
}

}  // namespace motorsim

#endif
