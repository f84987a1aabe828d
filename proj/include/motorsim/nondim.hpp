#ifndef MOTORSIM_NONDIM_HPP
#define MOTORSIM_NONDIM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "motorsim/params.hpp"
#include "motorsim/spring.hpp"

namespace motorsim {

/// Reference scales and dimensionless groups. Lengths are measured in
/// length_ref = sqrt(2 kBT / kappa), times in time_ref = gamma / kappa,
/// forces in force_ref = sqrt(2 kBT kappa). The slow (transport) time is
/// t_bar = epsilon * t_tilde.
struct DimensionlessGroups {
    double epsilon = 0.0;     // v * gamma / force_ref: cargo relaxation vs transport
    double s = 0.0;           // force_ref / F*: thermal force vs stall force
    double rho = 0.0;         // sigma^2 sqrt(kappa) / (v sqrt(2 kBT))
    double sigma_mc2 = 0.0;   // sigma^2 gamma / (2 kBT); equals epsilon * rho
    double theta_tilde = 0.0; // trap force / force_ref
    double lambda = 0.0;      // length_ref / Lc, populated for general springs only
    double length_ref = 0.0;  // nm
    double time_ref = 0.0;    // s
    double force_ref = 0.0;   // pN
    int n_motors = 1;

    /// theta expressed in stall-force units; equals s * theta_tilde.
    double theta_over_fstar() const { return s * theta_tilde; }
    double sigma_mc() const { return std::sqrt(sigma_mc2); }
};

inline DimensionlessGroups compute_groups(const PhysicalParams& p) {
    validate(p);
    DimensionlessGroups g;
    g.force_ref = std::sqrt(2.0 * p.kBT * p.spring_kappa);
    g.length_ref = std::sqrt(2.0 * p.kBT / p.spring_kappa);
    const double gamma = p.friction();
    g.time_ref = gamma / p.spring_kappa;
    g.epsilon = p.free_velocity * gamma / g.force_ref;
    g.s = g.force_ref / p.stall_force;
    g.rho = p.motor_diffusion * std::sqrt(p.spring_kappa) /
            (p.free_velocity * std::sqrt(2.0 * p.kBT));
    // Computed from its own definition; epsilon * rho must reproduce it
    // (identity of the definitions, property-tested).
    g.sigma_mc2 = p.motor_diffusion * gamma / (2.0 * p.kBT);
    g.theta_tilde = p.trap_force / g.force_ref;
    g.n_motors = p.n_motors;
    return g;
}

/// With a general spring law, kappa plays the role of the linear-regime
/// stiffness and the extra group lambda = length_ref / Lc records how far
/// thermal fluctuations probe the nonlinearity.
inline DimensionlessGroups compute_groups(const PhysicalParams& p, const SpringLaw& law) {
    DimensionlessGroups g = compute_groups(p);
    if (law.kind() == SpringLaw::Kind::General) g.lambda = g.length_ref / law.Lc();
    return g;
}

/// Build groups directly (tests and parameter scans); reference scales
/// default to unity so dimensional conversions are no-ops.
inline DimensionlessGroups make_groups(double epsilon, double s, double rho,
                                       double theta_tilde, int n_motors = 1) {
    if (epsilon < 0.0 || rho < 0.0 || !(s > 0.0))
        throw std::invalid_argument("make_groups: need epsilon, rho >= 0 and s > 0");
    DimensionlessGroups g;
    g.epsilon = epsilon;
    g.s = s;
    g.rho = rho;
    g.sigma_mc2 = epsilon * rho;
    g.theta_tilde = theta_tilde;
    g.length_ref = 1.0;
    g.time_ref = 1.0;
    g.force_ref = 1.0;
    g.n_motors = n_motors;
    return g;
}

/// Transport regime by the size of epsilon: diffusion dominated (cargo
/// relaxes fast, averaged theory valid) up to and including the threshold,
/// drag dominated above it. The boundary is a reported classification, not a
/// behavioral switch.
enum class Regime { DiffusionDominated, DragDominated };

inline Regime regime_classify(const DimensionlessGroups& g, double threshold = 0.1) {
    if (!(threshold > 0.0)) throw std::invalid_argument("regime threshold must be > 0");
    return g.epsilon <= threshold ? Regime::DiffusionDominated : Regime::DragDominated;
}

inline const char* regime_name(Regime r) {
    return r == Regime::DiffusionDominated ? "diffusion_dominated" : "drag_dominated";
}

/// Which clock a dimensionless trajectory is recorded on.
enum class TimeBase { Unspecified, FastTilde, SlowBar };

/// Convert one dimensionless path to nm / seconds.
struct DimensionalPath {
    std::vector<double> t_seconds;
    std::vector<std::vector<double>> series_nm;  // one vector per coordinate
};

inline DimensionalPath rescale_trajectory(const std::vector<double>& t,
                                          const std::vector<std::vector<double>>& series,
                                          const DimensionlessGroups& g, TimeBase base) {
    if (base == TimeBase::Unspecified)
        throw std::invalid_argument("rescale_trajectory: time base must be flagged");
    double tscale = g.time_ref;
    if (base == TimeBase::SlowBar) {
        if (!(g.epsilon > 0.0))
            throw std::invalid_argument("rescale_trajectory: slow base needs epsilon > 0");
        tscale = g.time_ref / g.epsilon;
    }
    DimensionalPath out;
    out.t_seconds.reserve(t.size());
    for (double ti : t) out.t_seconds.push_back(ti * tscale);
    out.series_nm.reserve(series.size());
    for (const auto& s : series) {
        std::vector<double> dim;
        dim.reserve(s.size());
        for (double x : s) dim.push_back(x * g.length_ref);
        out.series_nm.push_back(std::move(dim));
    }
    return out;
}

/// Inverse of rescale_trajectory; round trips are identity to round-off.
inline void nondimensionalize_trajectory(const DimensionalPath& path,
                                         const DimensionlessGroups& g, TimeBase base,
                                         std::vector<double>& t_out,
                                         std::vector<std::vector<double>>& series_out) {
    if (base == TimeBase::Unspecified)
        throw std::invalid_argument("nondimensionalize_trajectory: flag the time base");
    double tscale = g.time_ref;
    if (base == TimeBase::SlowBar) tscale = g.time_ref / g.epsilon;
    t_out.clear();
    for (double ti : path.t_seconds) t_out.push_back(ti / tscale);
    series_out.clear();
    for (const auto& s : path.series_nm) {
        std::vector<double> nd;
        nd.reserve(s.size());
        for (double x : s) nd.push_back(x / g.length_ref);
        series_out.push_back(std::move(nd));
    }
}

/// Slow-time dimensionless velocity (units of v) -> nm/s.
inline double velocity_to_nm_s(double v_slow, const DimensionlessGroups& g) {
    return v_slow * g.epsilon * g.length_ref / g.time_ref;
}

/// Slow-time dimensionless diffusivity -> nm^2/s.
inline double diffusion_to_nm2_s(double d_slow, const DimensionlessGroups& g) {
    return d_slow * g.epsilon * g.length_ref * g.length_ref / g.time_ref;
}

}  // namespace motorsim

#endif
