#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "motorsim/averaging.hpp"
#include "motorsim/params.hpp"

#include "oracle_utils.hpp"

using namespace motorsim;

namespace {
const ForceVelocityCurve& sigmoid() {
    static const ForceVelocityCurve g = sigmoid_from_velocities(600.0, -50.0, 500.0);
    return g;
}
DimensionlessGroups preset_groups(double trap_force = 0.0) {
    PhysicalParams p = kinesin_invitro();
    p.n_motors = 2;
    p.trap_force = trap_force;
    return compute_groups(p);
}
}  // namespace

TEST_CASE("effective pair drift under a held cargo") {
    const DimensionlessGroups g = preset_groups();
    REQUIRE(std::abs(G_fixed_cargo(sigmoid(), 0.0, g.s) - 1.0) < 1e-12);
    // G(u) = g(-s u / 2): an opening separation assists the leading motor.
    REQUIRE(G_fixed_cargo(sigmoid(), 2.0, g.s) > 1.0);
    REQUIRE(G_fixed_cargo(sigmoid(), -2.0, g.s) < 1.0);
}

TEST_CASE("cargo fluctuations strictly slow the pair at zero separation") {
    const DimensionlessGroups g = preset_groups();
    const double G0 = G_fluctuating_cargo(sigmoid(), 0.0, g.s);
    REQUIRE(oracle::rel_err(G0, oracle::kGfluct0) < 1e-9);
    REQUIRE(G0 < 1.0);  // strict: averaging over cargo noise costs speed
}

TEST_CASE("fluctuating pair drift equals the half-variance Gaussian average") {
    const DimensionlessGroups g = preset_groups(2.0);
    auto H = make_pair_drift(sigmoid(), g, CargoMode::Fluctuating);
    for (double r : {-3.0, 0.0, 1.5}) {
        const double direct = gaussian_average(
            sigmoid(), g.s * (r + g.theta_tilde) / 2.0, g.s * g.s / 4.0);
        REQUIRE(std::abs(H(r) - direct) < 1e-12);
    }
}

TEST_CASE("separation density is even to machine precision at any load") {
    for (double theta : {0.0, 5.0, 12.0}) {
        for (CargoMode mode : {CargoMode::Fluctuating, CargoMode::Fixed}) {
            const StationaryDensity1D pi =
                pi_R_density(sigmoid(), preset_groups(theta), mode, 8193);
            const auto& v = pi.values();
            double asym = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                asym = std::max(asym, std::abs(v[i] - v[v.size() - 1 - i]));
            REQUIRE(asym == 0.0);
            REQUIRE(std::abs(pi.mass() - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("linear g gives the closed-form pair transport") {
    const ForceVelocityCurve lin = ForceVelocityCurve::linear();
    for (double theta : {0.0, 1.0, 3.0}) {
        DimensionlessGroups g = make_groups(0.1, 0.3, 1.7, theta, 2);
        const TwoMotorReduction red = two_motor_reduction(lin, g, CargoMode::Fluctuating);
        REQUIRE(oracle::rel_err(red.v2, 1.0 - g.s * theta / 2.0) < 1e-6);
        REQUIRE(oracle::rel_err(red.d2, g.rho / 4.0) < 1e-6);
        REQUIRE(oracle::rel_err(red.pi_R.variance(), g.rho / g.s) < 1e-5);
    }
}

TEST_CASE("frozen two-motor transport at zero load") {
    const DimensionlessGroups g = preset_groups();
    const TwoMotorReduction red = two_motor_reduction(sigmoid(), g, CargoMode::Fluctuating);
    REQUIRE(std::abs(red.v2 - oracle::kV2Theta0) < 5e-6);
    REQUIRE(std::abs(red.d2 - oracle::kD2Theta0) < 5e-6);
    REQUIRE(oracle::rel_err(red.pi_R.variance(), oracle::kVarR) < 1e-5);
    REQUIRE(oracle::rel_err(red.g_minus_slope0, oracle::kGminusSlope0) < 1e-5);
    REQUIRE(red.d2_bare == Catch::Approx(g.rho / 4.0));
    REQUIRE(red.d2_configuration > 0.0);
    REQUIRE(red.d2 > g.rho / 4.0);

    const TwoMotorReduction fixed = two_motor_reduction(sigmoid(), g, CargoMode::Fixed);
    REQUIRE(oracle::rel_err(fixed.v2, oracle::kV2Theta0Fixed) < 1e-6);
    REQUIRE(fixed.v2 > red.v2);  // held cargo removes the fluctuation penalty
}

TEST_CASE("pair still advances at the single-motor deterministic stall") {
    const DimensionlessGroups base = preset_groups();
    DimensionlessGroups g = base;
    g.theta_tilde = 2.0 / base.s;  // theta/F* = 1 per motor under equal sharing
    const TwoMotorReduction red = two_motor_reduction(sigmoid(), g, CargoMode::Fixed);
    REQUIRE(std::abs(red.v2 - oracle::kV2AtTwoOverSFixed) < 1e-6);
    REQUIRE(red.v2 > 0.0);
}

TEST_CASE("reduction through a user-supplied G matches the built-in path") {
    const DimensionlessGroups g = preset_groups(3.0);
    auto G = [&](double u) { return G_fluctuating_cargo(sigmoid(), u, g.s); };
    const TwoMotorReduction a = two_motor_reduction_from_G(G, g, g.theta_tilde, 8193);
    const TwoMotorReduction b = two_motor_reduction(sigmoid(), g, CargoMode::Fluctuating, 8193);
    REQUIRE(std::abs(a.v2 - b.v2) < 1e-12);
    REQUIRE(std::abs(a.d2 - b.d2) < 1e-12);
}

TEST_CASE("frozen stall loads and superadditivity") {
    const DimensionlessGroups g = preset_groups();
    const StallResult s1 = stall_force_one_motor(sigmoid(), g);
    const StallResult s2f = stall_force_two_motor(sigmoid(), g, CargoMode::Fluctuating);
    const StallResult s2x = stall_force_two_motor(sigmoid(), g, CargoMode::Fixed);
    REQUIRE(std::abs(s1.theta_tilde_star - oracle::kTheta1Star) < 2e-4);
    REQUIRE(std::abs(s2f.theta_tilde_star - oracle::kTheta2StarFluct) < 2e-4);
    REQUIRE(std::abs(s2x.theta_tilde_star - oracle::kTheta2StarFixed) < 2e-4);
    REQUIRE(s2f.theta_tilde_star > 2.0 * s1.theta_tilde_star + 1e-3);
    const double ratio = s2f.theta_tilde_star / s1.theta_tilde_star;
    REQUIRE(std::abs(ratio - oracle::kStallRatio) < 1e-4);
    REQUIRE(std::abs(s1.theta_star_pn - oracle::kTheta1Star * oracle::kForceRef) < 5e-4);
    REQUIRE(s1.monotone);
    REQUIRE(s2f.monotone);
}

TEST_CASE("stall bisection rejects brackets that do not straddle zero") {
    auto vel = [](double theta) { return 1.0 - theta; };  // root at 1
    REQUIRE_THROWS_AS(stall_force(vel, 0.0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(stall_force(vel, 2.0, 3.0), std::invalid_argument);
    const StallResult ok = stall_force(vel, 0.0, 2.0);
    REQUIRE(std::abs(ok.theta_tilde_star - 1.0) < 1e-4);
    REQUIRE(ok.monotone);
}

TEST_CASE("stall bisection flags non-monotone velocity curves") {
    auto vel = [](double theta) { return std::sin(theta); };  // rises, then falls
    const StallResult r = stall_force(vel, 1.0, 4.0);
    REQUIRE_FALSE(r.monotone);
    REQUIRE_FALSE(r.note.empty());
    REQUIRE(std::abs(r.theta_tilde_star - M_PI) < 1e-3);
}
