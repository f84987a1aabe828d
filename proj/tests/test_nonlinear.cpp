#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "motorsim/averaging.hpp"
#include "motorsim/nonlinear.hpp"
#include "motorsim/params.hpp"

#include "oracle_utils.hpp"

using namespace motorsim;

namespace {
const ForceVelocityCurve& sigmoid() {
    static const ForceVelocityCurve g = sigmoid_from_velocities(600.0, -50.0, 500.0);
    return g;
}
DimensionlessGroups preset_groups(double trap_force, int n) {
    PhysicalParams p = kinesin_invitro();
    p.trap_force = trap_force;
    p.n_motors = n;
    return compute_groups(p);
}
}  // namespace

TEST_CASE("quadratic potential reproduces the one-motor Gaussian average") {
    for (double theta : {0.0, 2.0, 6.0}) {
        const DimensionlessGroups g = preset_groups(theta, 1);
        const GeneralSpringSet springs =
            make_spring_set({SpringLaw::linear(0.34)}, g);
        const double general = one_motor_velocity_general(sigmoid(), springs, g);
        const double reference =
            gaussian_average(sigmoid(), g.s * g.theta_tilde, 0.5 * g.s * g.s);
        REQUIRE(std::abs(general - reference) < 1e-8);
    }
}

TEST_CASE("quadratic potential reproduces the fluctuating pair drift") {
    const DimensionlessGroups g = preset_groups(0.0, 2);
    const GeneralSpringSet springs =
        make_spring_set({SpringLaw::linear(0.34), SpringLaw::linear(0.34)}, g);
    auto drift = make_pair_drift_general(sigmoid(), springs, g);
    for (double r : {0.0, 1.0, 3.0, -2.0}) {
        // g_bar_1 at separation r equals the averaged drift G evaluated at -r.
        const double want = G_fluctuating_cargo(sigmoid(), -r, g.s);
        REQUIRE(std::abs(drift(r) - want) < 1e-8);
    }
}

TEST_CASE("general-spring two-motor reduction collapses to the linear one") {
    const DimensionlessGroups g = preset_groups(2.0, 2);
    const GeneralSpringSet springs =
        make_spring_set({SpringLaw::linear(0.34), SpringLaw::linear(0.34)}, g);
    auto drift = make_pair_drift_general(sigmoid(), springs, g, 2049);
    const TwoMotorReduction general = two_motor_reduction(drift, g, 4097);
    const TwoMotorReduction linear =
        two_motor_reduction(sigmoid(), g, CargoMode::Fluctuating, 4097);
    REQUIRE(std::abs(general.v2 - linear.v2) < 1e-6);
    REQUIRE(std::abs(general.d2 - linear.d2) < 1e-5);
}

TEST_CASE("cargo density is translation covariant") {
    const DimensionlessGroups g = preset_groups(0.0, 2);
    const GeneralSpringSet springs =
        make_spring_set({SpringLaw::linear(0.34), SpringLaw::linear(0.34)}, g);
    const StationaryDensity1D base = cargo_density_general({0.0, 1.0}, 0.0, springs);
    const StationaryDensity1D shifted = cargo_density_general({5.0, 6.0}, 0.0, springs);
    REQUIRE(std::abs((shifted.mean() - base.mean()) - 5.0) < 1e-9);
    REQUIRE(std::abs(shifted.variance() - base.variance()) < 1e-10);
    REQUIRE(std::abs(base.mass() - 1.0) < 1e-8);
}

TEST_CASE("cargo density under quadratic potentials is the known Gaussian") {
    // N motors with unit-kappa quadratic tails: z | x ~ N(mean(x) - theta/N, 1/(2N)).
    const DimensionlessGroups g = preset_groups(3.0, 2);
    const GeneralSpringSet springs =
        make_spring_set({SpringLaw::linear(0.34), SpringLaw::linear(0.34)}, g);
    const StationaryDensity1D m =
        cargo_density_general({1.0, 2.0}, g.theta_tilde, springs);
    REQUIRE(std::abs(m.mean() - (1.5 - g.theta_tilde / 2.0)) < 1e-9);
    REQUIRE(std::abs(m.variance() - 0.25) < 1e-9);
}

TEST_CASE("wormlike-chain one-motor velocity is finite and bounded") {
    const DimensionlessGroups g = preset_groups(0.0, 1);
    const SpringLaw wlc = SpringLaw::wormlike_chain(0.34, 70.0);
    const GeneralSpringSet springs = make_spring_set({wlc}, compute_groups(kinesin_invitro(), wlc));
    const double v = one_motor_velocity_general(sigmoid(), springs, g);
    REQUIRE(std::isfinite(v));
    REQUIRE(v > 0.0);
    REQUIRE(v < sigmoid().asymptote_assisting());
}

TEST_CASE("wormlike-chain stiffening shifts the drift against the load") {
    // Under load the wlc tail stretches less than a Hookean tail, so the
    // averaged drift differs; both must still decrease with load.
    const SpringLaw wlc = SpringLaw::wormlike_chain(0.34, 70.0);
    double prev = 1e9;
    for (double theta : {0.0, 3.0, 6.0}) {
        PhysicalParams p = kinesin_invitro();
        p.trap_force = theta;
        const DimensionlessGroups g = compute_groups(p, wlc);
        const GeneralSpringSet springs = make_spring_set({wlc}, g);
        const double v = one_motor_velocity_general(sigmoid(), springs, g);
        REQUIRE(v < prev);
        prev = v;
    }
}

TEST_CASE("contour ratio guardrails") {
    PhysicalParams p = kinesin_invitro();
    // lambda = length_ref / lc = 4.911 / 3 = 1.64 > 1.5: refuse.
    const SpringLaw too_short = SpringLaw::wormlike_chain(0.34, 3.0);
    REQUIRE_THROWS_AS(make_spring_set({too_short}, compute_groups(p, too_short)),
                      std::invalid_argument);
    // lambda = 1.23 in (1, 1.5]: allowed but flagged.
    const SpringLaw marginal = SpringLaw::wormlike_chain(0.34, 4.0);
    const GeneralSpringSet flagged =
        make_spring_set({marginal}, compute_groups(p, marginal));
    REQUIRE(flagged.lambda_warning);
    const SpringLaw fine = SpringLaw::wormlike_chain(0.34, 70.0);
    REQUIRE_FALSE(make_spring_set({fine}, compute_groups(p, fine)).lambda_warning);
}
