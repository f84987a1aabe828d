#ifndef MOTORSIM_SPRING_HPP
#define MOTORSIM_SPRING_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "motorsim/quadrature.hpp"

namespace motorsim {

/// Motor-cargo tether law F(r), r = extension in nm, F in pN. General laws
/// are written as F(r) = Fbar * Phi'(r / Lc) with a convex even potential
/// Phi, Fbar = kappa * Lc, so the linear spring is Phi(u) = u^2 / 2.
class SpringLaw {
  public:
    enum class Kind { Linear, General };

    static SpringLaw linear(double kappa) {
        if (!(kappa > 0.0)) throw std::invalid_argument("SpringLaw: kappa must be > 0");
        SpringLaw s;
        s.kind_ = Kind::Linear;
        s.kappa_ = kappa;
        s.contour_ = std::numeric_limits<double>::infinity();
        return s;
    }

    /// General law from the dimensionless potential Phi and its derivative.
    /// `contour` bounds the admissible |r| (nm); pass +inf when unrestricted.
    static SpringLaw general(double kappa, double Lc,
                             std::function<double(double)> phi,
                             std::function<double(double)> dphi,
                             double contour = std::numeric_limits<double>::infinity()) {
        if (!(kappa > 0.0) || !(Lc > 0.0))
            throw std::invalid_argument("SpringLaw: kappa, Lc must be > 0");
        SpringLaw s;
        s.kind_ = Kind::General;
        s.kappa_ = kappa;
        s.Lc_ = Lc;
        s.phi_ = std::move(phi);
        s.dphi_ = std::move(dphi);
        s.contour_ = contour;
        return s;
    }

    /// Wormlike-chain-style stiffening tether:
    ///   F(r) = kappa r + sgn(r)/4 [ (1 - |r|/lc)^{-2} - 1 ],  |r| < lc.
    /// The divergence at |r| -> lc caps the extension at the contour length.
    static SpringLaw wormlike_chain(double kappa, double lc) {
        if (!(kappa > 0.0) || !(lc > 0.0))
            throw std::invalid_argument("SpringLaw: kappa, lc must be > 0");
        const double fbar = kappa * lc;
        auto phi = [kappa, lc, fbar](double u) {
            const double au = std::abs(u);
            if (au >= 1.0) return std::numeric_limits<double>::infinity();
            // integral of F(u*lc)/Fbar: u^2/2 + [1/(1-|u|) - 1 - |u|] / (4 kappa lc)
            return 0.5 * u * u + (1.0 / (1.0 - au) - 1.0 - au) / (4.0 * fbar);
        };
        auto dphi = [fbar](double u) {
            const double au = std::abs(u);
            if (au >= 1.0)
                return u > 0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
            const double s = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
            const double w = 1.0 - au;
            return u + s * (1.0 / (w * w) - 1.0) / (4.0 * fbar);
        };
        SpringLaw s = general(kappa, lc, phi, dphi, lc);
        s.is_wlc_ = true;
        return s;
    }

    Kind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double Lc() const { return Lc_; }
    double Fbar() const { return kappa_ * Lc_; }
    double contour_length() const { return contour_; }
    bool is_wormlike_chain() const { return is_wlc_; }

    /// Restoring force at extension r (nm) in pN.
    double force(double r) const {
        if (kind_ == Kind::Linear) return kappa_ * r;
        if (std::abs(r) >= contour_)
            throw std::domain_error("SpringLaw: extension beyond contour length");
        return Fbar() * dphi_(r / Lc_);
    }

    /// Dimensionless potential Phi(u) and slope Phi'(u); identity for linear.
    double phi(double u) const {
        return kind_ == Kind::Linear ? 0.5 * u * u : phi_(u);
    }
    double dphi(double u) const { return kind_ == Kind::Linear ? u : dphi_(u); }

  private:
    Kind kind_ = Kind::Linear;
    double kappa_ = 0.0;
    double Lc_ = 1.0;
    double contour_ = std::numeric_limits<double>::infinity();
    bool is_wlc_ = false;
    std::function<double(double)> phi_, dphi_;
};

/// exp(-2 * Phi-type potential) must decay fast enough to normalize the cargo
/// density; probe the Boltzmann weight over the evaluation window.
inline bool check_confinement(const SpringLaw& s, double window_lo, double window_hi) {
    const double span = window_hi - window_lo;
    if (!(span > 0.0)) throw std::invalid_argument("check_confinement: bad window");
    // 0.999.. of the admissible range when the contour caps it.
    double lo = window_lo, hi = window_hi;
    if (std::isfinite(s.contour_length())) {
        lo = std::max(lo, -0.999 * s.contour_length());
        hi = std::min(hi, 0.999 * s.contour_length());
    }
    auto weight = [&](double r) {
        const double u = r / s.Lc();
        const double p = s.phi(u);
        return std::isfinite(p) ? std::exp(-2.0 * p) : 0.0;
    };
    const double mass = adaptive_simpson(weight, lo, hi, 1e-8);
    const double edge = std::max(weight(lo), weight(hi));
    const double peak = weight(0.0);
    return std::isfinite(mass) && mass > 0.0 && edge < 0.5 * peak + 1e-12;
}

}  // namespace motorsim

#endif
