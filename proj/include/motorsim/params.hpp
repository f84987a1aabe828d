#ifndef MOTORSIM_PARAMS_HPP
#define MOTORSIM_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace motorsim {

/// Dimensional model parameters. Forces in pN, lengths in nm, times in s,
/// energies in pN*nm. The cargo friction is always derived from the bead
/// radius and fluid viscosity (Stokes drag), never stored on its own.
struct PhysicalParams {
    double step_size_L = 8.0;         // nm, motor step (sets lattice scale only)
    double stall_force = 7.0;         // pN, F* of the force-velocity curve
    double free_velocity = 500.0;     // nm/s, v = speed at zero load
    double max_velocity = 600.0;      // nm/s, assisting-load asymptote
    double min_velocity = -50.0;      // nm/s, super-stall asymptote
    double spring_kappa = 0.34;       // pN/nm, linear tether stiffness
    double motor_diffusion = 5000.0;  // nm^2/s, sigma^2 of the motor heads
    double bead_radius = 500.0;       // nm, cargo radius a
    double viscosity = 1.0610329539459689e-9;  // pN*s/nm^2, chosen so 6*pi*a*eta = 1e-5
    double kBT = 4.1;                 // pN*nm
    double trap_force = 0.0;          // pN, applied load theta (signed)
    int n_motors = 1;

    /// Stokes drag gamma = 6*pi*a*eta  [pN*s/nm].
    double friction() const { return 6.0 * M_PI * bead_radius * viscosity; }
};

inline void validate(const PhysicalParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("PhysicalParams: ") + name +
                                        " must be positive and finite");
    };
    positive(p.step_size_L, "step_size_L");
    positive(p.stall_force, "stall_force");
    positive(p.free_velocity, "free_velocity");
    positive(p.spring_kappa, "spring_kappa");
    positive(p.motor_diffusion, "motor_diffusion");
    positive(p.bead_radius, "bead_radius");
    positive(p.viscosity, "viscosity");
    positive(p.kBT, "kBT");
    // Backward superstall velocity is nonpositive; assisting load speeds the
    // motor up; the free velocity sits above the midpoint of the asymptotes
    // (this is what keeps all four sigmoid constants positive).
    if (!(p.min_velocity <= 0.0))
        throw std::invalid_argument("PhysicalParams: min_velocity must be <= 0");
    if (!(p.max_velocity > p.free_velocity))
        throw std::invalid_argument("PhysicalParams: need max_velocity > free_velocity");
    if (!(std::abs(p.min_velocity) < p.max_velocity))
        throw std::invalid_argument("PhysicalParams: need |min_velocity| < max_velocity");
    if (!(p.free_velocity > 0.5 * (p.max_velocity + p.min_velocity)))
        throw std::invalid_argument(
            "PhysicalParams: need free_velocity > (max_velocity + min_velocity)/2");
    if (p.n_motors < 1)
        throw std::invalid_argument("PhysicalParams: n_motors must be >= 1");
    if (!std::isfinite(p.trap_force))
        throw std::invalid_argument("PhysicalParams: trap_force must be finite");
}

/// Conventional kinesin-on-bead numbers for in vitro assays. The viscosity is
/// fixed so that the Stokes drag comes out at 1e-5 pN*s/nm exactly (water is
/// ~1e-9 in these units; the bead-corrected effective value is ~6% higher).
inline PhysicalParams kinesin_invitro() {
    PhysicalParams p;  // defaults above are the preset
    validate(p);
    return p;
}

}  // namespace motorsim

#endif
