#ifndef MOTORSIM_NONLINEAR_HPP
#define MOTORSIM_NONLINEAR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "motorsim/averaging.hpp"
#include "motorsim/density.hpp"
#include "motorsim/force_velocity.hpp"
#include "motorsim/nondim.hpp"
#include "motorsim/spring.hpp"

namespace motorsim {

/// Per-motor nondimensional spring set. Every law is reduced to the two maps
/// needed by the averaged theory:
///   potential_i(y) = lambda_i^{-2} Phi_i(lambda_i y)   (cargo Boltzmann weight)
///   force_i(y)     = lambda_i^{-1} Phi_i'(lambda_i y)  (nondimensional force)
/// with lambda_i = length_ref / Lc_i. Quadratic Phi collapses both to the
/// linear-spring expressions for any lambda.
struct GeneralSpringSet {
    std::vector<std::function<double(double)>> potential;
    std::vector<std::function<double(double)>> force;
    std::vector<double> lambda;
    double y_limit = std::numeric_limits<double>::infinity();  // domain bound on |y|
    bool lambda_warning = false;  // any lambda in (1, 1.5]
};

inline GeneralSpringSet make_spring_set(const std::vector<SpringLaw>& laws,
                                        const DimensionlessGroups& groups) {
    if (laws.empty()) throw std::invalid_argument("make_spring_set: no laws");
    GeneralSpringSet set;
    for (const SpringLaw& law : laws) {
        const double lambda =
            law.kind() == SpringLaw::Kind::Linear ? 1.0 : groups.length_ref / law.Lc();
        if (law.kind() == SpringLaw::Kind::General) {
            if (lambda > 1.5)
                throw std::invalid_argument(
                    "make_spring_set: lambda > 1.5, nondimensionalization invalid "
                    "(thermal extension exceeds the spring scale)");
            if (lambda > 1.0) set.lambda_warning = true;
        }
        set.lambda.push_back(lambda);
        // Copy the law into the closures: spring sets outlive their inputs.
        set.potential.push_back(
            [law, lambda](double y) { return law.phi(lambda * y) / (lambda * lambda); });
        set.force.push_back(
            [law, lambda](double y) { return law.dphi(lambda * y) / lambda; });
        if (std::isfinite(law.contour_length()))
            set.y_limit =
                std::min(set.y_limit, law.contour_length() / groups.length_ref);
    }
    return set;
}

/// Quasi-stationary cargo density for motors frozen at positions x:
///   log m(z) = -2 [ theta~ z + sum_i potential_i(x_i - z) ] - log K_Z.
/// Reduces to the Gaussian N(mean(x) - theta~/N, 1/(2N)) for quadratic Phi.
inline StationaryDensity1D cargo_density_general(const std::vector<double>& x,
                                                 double theta_tilde,
                                                 const GeneralSpringSet& springs,
                                                 std::size_t n_points = 4097) {
    const std::size_t N = x.size();
    if (N == 0 || springs.potential.size() != N)
        throw std::invalid_argument("cargo_density_general: motor/spring mismatch");
    auto logm = [&](double z) {
        double pot = theta_tilde * z;
        for (std::size_t i = 0; i < N; ++i) {
            const double p = springs.potential[i](x[i] - z);
            if (!std::isfinite(p)) return -std::numeric_limits<double>::infinity();
            pot += p;
        }
        return -2.0 * pot;
    };
    double center = -theta_tilde / static_cast<double>(N);
    for (double xi : x) center += xi / static_cast<double>(N);
    const double half = 8.0 * std::sqrt(0.5 / static_cast<double>(N));
    return detail::build_density_window(logm, center, half, n_points);
}

/// Averaged drift of motor i with the cargo equilibrated:
///   g_bar_i = ∫ g( s * force_i(x_i - z) ) m(z) dz.
inline double averaged_drift_general(const ForceVelocityCurve& curve,
                                     const std::vector<double>& x, double theta_tilde,
                                     const GeneralSpringSet& springs,
                                     std::size_t motor_index,
                                     const DimensionlessGroups& groups,
                                     std::size_t n_points = 4097) {
    if (motor_index >= x.size())
        throw std::invalid_argument("averaged_drift_general: bad motor index");
    const StationaryDensity1D m = cargo_density_general(x, theta_tilde, springs, n_points);
    const double xi = x[motor_index];
    const auto& force = springs.force[motor_index];
    return m.expectation([&](double z) { return curve(groups.s * force(xi - z)); });
}

/// One-motor averaged velocity under a general spring (slow-time units of v).
/// Translation invariance makes the motor position irrelevant.
inline double one_motor_velocity_general(const ForceVelocityCurve& curve,
                                         const GeneralSpringSet& springs,
                                         const DimensionlessGroups& groups,
                                         std::size_t n_points = 4097) {
    if (springs.potential.size() != 1)
        throw std::invalid_argument("one_motor_velocity_general: needs one spring");
    return averaged_drift_general(curve, {0.0}, groups.theta_tilde, springs, 0, groups,
                                  n_points);
}

/// Separation-dependent pair drift r -> g_bar_1((r/2, -r/2)) for two identical
/// general springs; plugs straight into two_motor_reduction. The exchange
/// symmetry g_bar_2(r) = g_bar_1(-r) is inherited automatically there.
inline std::function<double(double)> make_pair_drift_general(
    const ForceVelocityCurve& curve, const GeneralSpringSet& springs,
    const DimensionlessGroups& groups, std::size_t n_points = 1025) {
    if (springs.potential.size() != 2)
        throw std::invalid_argument("make_pair_drift_general: needs two springs");
    const double theta = groups.theta_tilde;
    return [&curve, &springs, &groups, theta, n_points](double r) {
        const std::vector<double> x{0.5 * r, -0.5 * r};
        return averaged_drift_general(curve, x, theta, springs, 0, groups, n_points);
    };
}

}  // namespace motorsim

#endif
