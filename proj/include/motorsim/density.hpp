#ifndef MOTORSIM_DENSITY_HPP
#define MOTORSIM_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "motorsim/quadrature.hpp"

namespace motorsim {

/// Stationary density tabulated on a uniform grid. Construction takes the
/// unnormalized log-density; the normalizer is computed once by composite
/// Simpson. The window is expected to be wide enough that the log-density at
/// both edges sits >= 40 nats below the peak (builders enforce this).
class StationaryDensity1D {
  public:
    StationaryDensity1D() = default;

    StationaryDensity1D(std::vector<double> grid, std::vector<double> log_unnormalized)
        : grid_(std::move(grid)), logp_(std::move(log_unnormalized)) {
        const std::size_t n = grid_.size();
        if (n < 5 || logp_.size() != n)
            throw std::invalid_argument("StationaryDensity1D: bad grid");
        h_ = grid_[1] - grid_[0];
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs((grid_[i] - grid_[i - 1]) - h_) > 1e-9 * std::abs(h_))
                throw std::invalid_argument("StationaryDensity1D: grid must be uniform");
        log_peak_ = *std::max_element(logp_.begin(), logp_.end());
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(logp_[i] - log_peak_);
        const double mass = simpson_uniform(w, h_);
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw std::runtime_error("StationaryDensity1D: vanishing mass");
        log_norm_ = log_peak_ + std::log(mass);
        values_.resize(n);
        for (std::size_t i = 0; i < n; ++i) values_[i] = std::exp(logp_[i] - log_norm_);
        cdf_ = cumulative_trapezoid(values_, h_);
        const double total = cdf_.back();
        for (double& c : cdf_) c /= total;  // exact unit mass for sampling/KS use
    }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double spacing() const { return h_; }
    double log_normalizer() const { return log_norm_; }

    /// Log tail clearance: peak log-density minus the larger edge value.
    double edge_log_drop() const {
        return log_peak_ - std::max(logp_.front(), logp_.back());
    }

    double mass() const {
        return simpson_uniform(values_, h_);
    }

    double mean() const {
        std::vector<double> w(values_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = grid_[i] * values_[i];
        return simpson_uniform(w, h_) / mass();
    }

    double variance() const {
        const double mu = mean();
        std::vector<double> w(values_.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = (grid_[i] - mu) * (grid_[i] - mu) * values_[i];
        return simpson_uniform(w, h_) / mass();
    }

    /// Expectation of an arbitrary function on the grid.
    template <typename F>
    double expectation(F&& f) const {
        std::vector<double> w(values_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = f(grid_[i]) * values_[i];
        return simpson_uniform(w, h_) / mass();
    }

    /// Linear-interpolated density and CDF (clamped outside the window).
    double pdf(double x) const { return interp(values_, x); }
    double cdf(double x) const {
        if (x <= grid_.front()) return 0.0;
        if (x >= grid_.back()) return 1.0;
        return interp(cdf_, x);
    }

    /// Kolmogorov-Smirnov distance between samples and this density.
    double ks_distance(std::vector<double> samples) const {
        if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double c = cdf(samples[i]);
            d = std::max(d, std::abs(c - static_cast<double>(i) / n));
            d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
        }
        return d;
    }

  private:
    double interp(const std::vector<double>& ys, double x) const {
        if (x <= grid_.front()) return ys.front();
        if (x >= grid_.back()) return ys.back();
        const double u = (x - grid_.front()) / h_;
        const std::size_t k = std::min(static_cast<std::size_t>(u), grid_.size() - 2);
        const double w = u - static_cast<double>(k);
        return (1.0 - w) * ys[k] + w * ys[k + 1];
    }

    std::vector<double> grid_, logp_, values_, cdf_;
    double h_ = 0.0, log_peak_ = 0.0, log_norm_ = 0.0;
};

namespace detail {

/// Expand [lo, hi] about `center` until the log-density falls at least
/// `drop` nats below its max at both edges, then tabulate on 2*half+1 points.
template <typename LogF>
StationaryDensity1D build_density_window(LogF&& logf, double center, double half_width,
                                         std::size_t n_points, double drop = 40.0,
                                         int max_expand = 60) {
    double lo = center - half_width, hi = center + half_width;
    for (int pass = 0; pass < max_expand; ++pass) {
        // Peak estimate from a coarse scan (the analytic center may be off
        // once the drift tilts the density).
        double peak = -std::numeric_limits<double>::infinity();
        const int coarse = 201;
        for (int i = 0; i < coarse; ++i) {
            const double x = lo + (hi - lo) * i / (coarse - 1.0);
            peak = std::max(peak, logf(x));
        }
        const bool left_ok = logf(lo) <= peak - drop;
        const bool right_ok = logf(hi) <= peak - drop;
        if (left_ok && right_ok) break;
        if (!left_ok) lo -= 0.5 * (hi - lo);
        if (!right_ok) hi += 0.5 * (hi - lo);
        if (pass == max_expand - 1)
            throw std::runtime_error("build_density_window: window failed to close");
    }
    if (n_points % 2 == 0) ++n_points;  // odd count keeps Simpson exact-order
    std::vector<double> grid(n_points), logp(n_points);
    const double h = (hi - lo) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = lo + h * static_cast<double>(i);
        logp[i] = logf(grid[i]);
    }
    return StationaryDensity1D(std::move(grid), std::move(logp));
}

}  // namespace detail

}  // namespace motorsim

#endif
