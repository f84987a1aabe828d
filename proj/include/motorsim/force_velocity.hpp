#ifndef MOTORSIM_FORCE_VELOCITY_HPP
#define MOTORSIM_FORCE_VELOCITY_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace motorsim {

/// Dimensionless force-velocity relation f -> g(f). The argument is the
/// opposing force in units of the stall force F*, the value is velocity in
/// units of the free velocity v, so g(0) = 1 and g(1) = 0 by construction.
class ForceVelocityCurve {
  public:
    enum class Kind { Sigmoid, Linear, Custom };

    ForceVelocityCurve() = default;

    static ForceVelocityCurve linear() {
        ForceVelocityCurve c;
        c.kind_ = Kind::Linear;
        c.g_plus_ = -std::numeric_limits<double>::infinity();
        c.g_minus_ = std::numeric_limits<double>::infinity();
        return c;
    }

    /// g = A - B tanh(C f - D). The four constants are pinned by the free
    /// velocity, the stall condition and the two asymptotes.
    static ForceVelocityCurve sigmoid(double v_max_over_v, double v_min_over_v) {
        if (!(v_max_over_v > 1.0) || !(v_min_over_v < 1.0))
            throw std::invalid_argument("sigmoid curve: need v_min < v < v_max");
        ForceVelocityCurve c;
        c.kind_ = Kind::Sigmoid;
        c.A_ = 0.5 * (v_max_over_v + v_min_over_v);
        c.B_ = 0.5 * (v_max_over_v - v_min_over_v);
        // g(0)=1 fixes D, g(1)=0 then fixes C.
        const double arg_d = (1.0 - c.A_) / c.B_;
        const double arg_c = c.A_ / c.B_;
        if (!(std::abs(arg_d) < 1.0) || !(std::abs(arg_c) < 1.0))
            throw std::domain_error("sigmoid curve: arctanh argument out of (-1, 1)");
        c.D_ = std::atanh(arg_d);
        c.C_ = std::atanh(arg_c) + c.D_;
        c.g_plus_ = v_max_over_v;
        c.g_minus_ = v_min_over_v;
        return c;
    }

    /// User-supplied analytic curve (value plus two derivatives).
    static ForceVelocityCurve custom(std::function<double(double)> g,
                                     std::function<double(double)> dg,
                                     std::function<double(double)> d2g,
                                     double g_at_minus_inf, double g_at_plus_inf) {
        ForceVelocityCurve c;
        c.kind_ = Kind::Custom;
        c.g_ = std::move(g);
        c.dg_ = std::move(dg);
        c.d2g_ = std::move(d2g);
        c.g_plus_ = g_at_minus_inf;
        c.g_minus_ = g_at_plus_inf;
        return c;
    }

    /// Tabulated curve with natural cubic spline interpolation; evaluation
    /// saturates at the end values outside the table. Second derivatives are
    /// taken by centered differences at h = 1e-4 for robustness near knots.
    static ForceVelocityCurve tabulated(std::vector<double> f, std::vector<double> g);

    double operator()(double f) const {
        switch (kind_) {
            case Kind::Sigmoid: return A_ - B_ * std::tanh(C_ * f - D_);
            case Kind::Linear: return 1.0 - f;
            case Kind::Custom: return g_(f);
        }
        return 0.0;
    }

    double d1(double f) const {
        switch (kind_) {
            case Kind::Sigmoid: {
                const double c = std::cosh(C_ * f - D_);
                return -B_ * C_ / (c * c);
            }
            case Kind::Linear: return -1.0;
            case Kind::Custom: return dg_(f);
        }
        return 0.0;
    }

    double d2(double f) const {
        switch (kind_) {
            case Kind::Sigmoid: {
                const double u = C_ * f - D_;
                const double c = std::cosh(u);
                return 2.0 * B_ * C_ * C_ * std::tanh(u) / (c * c);
            }
            case Kind::Linear: return 0.0;
            case Kind::Custom: return d2g_(f);
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    double A() const { return A_; }
    double B() const { return B_; }
    double C() const { return C_; }
    double D() const { return D_; }
    double asymptote_assisting() const { return g_plus_; }   // f -> -inf
    double asymptote_superstall() const { return g_minus_; } // f -> +inf

  private:
    Kind kind_ = Kind::Sigmoid;
    double A_ = 0.0, B_ = 0.0, C_ = 0.0, D_ = 0.0;
    double g_plus_ = 0.0, g_minus_ = 0.0;
    std::function<double(double)> g_, dg_, d2g_;
};

/// Sigmoid curve from dimensional velocities (nm/s).
inline ForceVelocityCurve sigmoid_from_velocities(double v_max, double v_min, double v) {
    return ForceVelocityCurve::sigmoid(v_max / v, v_min / v);
}

namespace detail {

// Natural cubic spline, plain tridiagonal solve.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n)
            throw std::invalid_argument("spline: need >= 3 matching points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("spline: abscissae must increase");
        m_.assign(n, 0.0);
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            a[i] = hl / 6.0;
            b[i] = (hl + hr) / 3.0;
            c[i] = hr / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
        }
        // Thomas algorithm; natural ends (m = 0) already encoded.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    double eval(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const std::size_t k = segment(x);
        const double h = x_[k + 1] - x_[k];
        const double t = (x_[k + 1] - x) / h, u = (x - x_[k]) / h;
        return t * y_[k] + u * y_[k + 1] +
               ((t * t * t - t) * m_[k] + (u * u * u - u) * m_[k + 1]) * h * h / 6.0;
    }

    double deriv(double x) const {
        if (x <= x_.front() || x >= x_.back()) return 0.0;
        const std::size_t k = segment(x);
        const double h = x_[k + 1] - x_[k];
        const double t = (x_[k + 1] - x) / h, u = (x - x_[k]) / h;
        return (y_[k + 1] - y_[k]) / h +
               ((3.0 * u * u - 1.0) * m_[k + 1] - (3.0 * t * t - 1.0) * m_[k]) * h / 6.0;
    }

  private:
    std::size_t segment(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }
    std::vector<double> x_, y_, m_;
};

}  // namespace detail

inline ForceVelocityCurve ForceVelocityCurve::tabulated(std::vector<double> f,
                                                        std::vector<double> g) {
    auto spline = std::make_shared<detail::CubicSpline>(std::move(f), std::move(g));
    auto value = [spline](double x) { return spline->eval(x); };
    auto d1 = [spline](double x) { return spline->deriv(x); };
    auto d2 = [spline](double x) {
        const double h = 1e-4;
        return (spline->eval(x + h) - 2.0 * spline->eval(x) + spline->eval(x - h)) /
               (h * h);
    };
    ForceVelocityCurve c;
    c.kind_ = Kind::Custom;
    c.g_plus_ = value(-1e9);
    c.g_minus_ = value(1e9);
    c.g_ = value;
    c.dg_ = d1;
    c.d2g_ = d2;
    return c;
}

/// Structural requirements on g used by the averaging theory: monotone
/// decreasing, concave up to f_* in (0, 1/2) and convex beyond 1 - f_*, and
/// the two strong-concavity combinations eta(f) = g(f) + g(-f) decreasing and
/// eta~(f) = g(1+f) + g(1-f) increasing for f > 0. All clauses are sampled on
/// a uniform grid.
struct AssumptionReport {
    bool monotone = false;
    bool concavity_split = false;   // exists f_* in (0, 1/2) with the sign pattern
    bool eta_decreasing = false;
    bool eta_tilde_increasing = false;
    double f_star = 0.0;            // witness for the concavity clause (if any)
    std::string first_violation;    // human-readable locator of the first failure

    bool all() const {
        return monotone && concavity_split && eta_decreasing && eta_tilde_increasing;
    }
};

inline AssumptionReport check_assumption_1(const ForceVelocityCurve& g,
                                           double f_lo = -3.0, double f_hi = 4.0,
                                           std::size_t n_grid = 7001) {
    if (!(f_hi > f_lo) || n_grid < 10)
        throw std::invalid_argument("check_assumption_1: bad grid");
    AssumptionReport rep;
    const double h = (f_hi - f_lo) / static_cast<double>(n_grid - 1);
    auto at = [&](std::size_t i) { return f_lo + h * static_cast<double>(i); };

    rep.monotone = true;
    for (std::size_t i = 0; i < n_grid; ++i) {
        if (!(g.d1(at(i)) < 0.0)) {
            rep.monotone = false;
            if (rep.first_violation.empty())
                rep.first_violation = "g'(f) >= 0 at f = " + std::to_string(at(i));
            break;
        }
    }

    // Concavity split: f1 = first grid point with g'' >= 0, f2 = last with
    // g'' <= 0. A valid f_* must sit strictly below f1, within (0, 1/2), and
    // satisfy 1 - f_* > f2.
    double f1 = f_hi, f2 = f_lo;
    for (std::size_t i = 0; i < n_grid; ++i) {
        if (g.d2(at(i)) >= 0.0) { f1 = at(i); break; }
    }
    for (std::size_t i = n_grid; i-- > 0;) {
        if (g.d2(at(i)) <= 0.0) { f2 = at(i); break; }
    }
    double cap = std::min(std::min(f1, 0.5), 1.0 - f2);
    if (cap > 0.0) {
        rep.concavity_split = true;
        rep.f_star = 0.5 * cap;  // any value in (0, cap) works; report the midpoint
    } else if (rep.first_violation.empty()) {
        rep.first_violation =
            "no f_* in (0, 1/2): first g''>=0 at f = " + std::to_string(f1) +
            ", last g''<=0 at f = " + std::to_string(f2);
    }

    rep.eta_decreasing = true;
    rep.eta_tilde_increasing = true;
    auto eta = [&](double f) { return g(f) + g(-f); };
    auto eta_tilde = [&](double f) { return g(1.0 + f) + g(1.0 - f); };
    double prev_e = eta(0.0), prev_et = eta_tilde(0.0);
    for (std::size_t i = 1; i < n_grid; ++i) {
        const double f = h * static_cast<double>(i);
        if (f > f_hi) break;
        const double e = eta(f), et = eta_tilde(f);
        if (rep.eta_decreasing && !(e < prev_e)) {
            rep.eta_decreasing = false;
            if (rep.first_violation.empty())
                rep.first_violation = "eta not decreasing at f = " + std::to_string(f);
        }
        if (rep.eta_tilde_increasing && !(et > prev_et)) {
            rep.eta_tilde_increasing = false;
            if (rep.first_violation.empty())
                rep.first_violation = "eta~ not increasing at f = " + std::to_string(f);
        }
        prev_e = e;
        prev_et = et;
    }
    return rep;
}

}  // namespace motorsim

#endif
