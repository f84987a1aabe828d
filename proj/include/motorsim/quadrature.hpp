#ifndef MOTORSIM_QUADRATURE_HPP
#define MOTORSIM_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace motorsim {

/// Nodes and weights for ∫ f(x) e^{-x^2} dx (physicists' convention).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Golub-Welsch construction: the nodes are the eigenvalues of the symmetric
// tridiagonal Jacobi matrix of the orthonormal Hermite recurrence (zero
// diagonal, off-diagonal sqrt(j/2)) and the weights are sqrt(pi) times the
// squared first components of the eigenvectors. Implicit-shift QL with only
// the first eigenvector row accumulated; guaranteed convergence, unlike
// polynomial Newton chains whose extrapolated starting guesses can hop to a
// neighboring root once the spectrum gets dense (n in the hundreds).
inline GaussHermiteRule compute_gauss_hermite(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gauss_hermite: need n >= 2");
    const int nn = static_cast<int>(n);
    std::vector<double> d(n, 0.0);   // diagonal (eigenvalues on exit)
    std::vector<double> e(n, 0.0);   // subdiagonal in e[0..n-2]
    std::vector<double> q0(n, 0.0);  // first row of the eigenvector matrix
    for (int j = 1; j < nn; ++j) e[j - 1] = std::sqrt(0.5 * j);
    q0[0] = 1.0;

    const double eps = 2.3e-16;
    for (int l = 0; l < nn; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < nn - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error("gauss_hermite: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = q0[i + 1];
                    q0[i + 1] = s * q0[i] + c * f;
                    q0[i] = c * q0[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&d](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mu0 = std::sqrt(M_PI);  // integral of e^{-x^2}
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = d[order[i]];
        rule.weights[i] = mu0 * q0[order[i]] * q0[order[i]];
    }
    // Enforce the exact +/- symmetry of the rule (kills rounding skew, so
    // expectations of odd integrands cancel identically).
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double z = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[j] = z;
        rule.nodes[i] = -z;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace detail

/// Cached rule lookup; rules are immutable once built.
inline const GaussHermiteRule& gauss_hermite(std::size_t n) {
    static const GaussHermiteRule r32 = detail::compute_gauss_hermite(32);
    static const GaussHermiteRule r64 = detail::compute_gauss_hermite(64);
    static const GaussHermiteRule r128 = detail::compute_gauss_hermite(128);
    static const GaussHermiteRule r256 = detail::compute_gauss_hermite(256);
    switch (n) {
        case 32: return r32;
        case 64: return r64;
        case 128: return r128;
        case 256: return r256;
        default: {
            thread_local GaussHermiteRule custom;
            if (custom.nodes.size() != n) custom = detail::compute_gauss_hermite(n);
            return custom;
        }
    }
}

/// E[f(X)] for X ~ N(mean, variance) via Gauss-Hermite.
template <typename F>
double gauss_expectation(F&& f, double mean, double variance, std::size_t n_nodes = 64) {
    if (variance < 0.0) throw std::domain_error("gauss_expectation: negative variance");
    if (variance == 0.0) return f(mean);
    const GaussHermiteRule& r = gauss_hermite(n_nodes);
    const double scale = std::sqrt(2.0 * variance);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(mean + scale * r.nodes[i]);
    return acc / std::sqrt(M_PI);
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// ∫_a^b f, adaptive Simpson with Richardson correction. The tolerance is
/// treated as absolute against a scale estimated from a first coarse pass,
/// so rel_tol behaves as a relative tolerance for non-tiny integrals.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-10,
                        int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::abs(whole);
    if (scale < 1e-300) scale = 1.0;
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale,
                                        max_depth);
}

/// Cumulative integral on a strictly increasing grid: out[i] = ∫_{grid[0]}^{grid[i]} f,
/// each segment by adaptive Simpson.
template <typename F>
std::vector<double> cumulative_integral(F&& f, const std::vector<double>& grid,
                                        double rel_tol = 1e-10) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("cumulative_integral: grid not increasing");
        out[i] = out[i - 1] + adaptive_simpson(f, grid[i - 1], grid[i], rel_tol);
    }
    return out;
}

/// Composite Simpson for samples on a uniform grid (odd count preferred;
/// a trailing trapezoid handles even counts).
inline double simpson_uniform(const std::vector<double>& values, double h) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (values[0] + values[1]);
    std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
    double acc = values[0] + values[last];
    for (std::size_t i = 1; i < last; ++i) acc += values[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    double result = acc * h / 3.0;
    if (n % 2 == 0) result += 0.5 * h * (values[n - 2] + values[n - 1]);
    return result;
}

/// Prefix trapezoid sums; out[i] = ∫ up to grid point i.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& values,
                                                double h) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
    return out;
}

/// Prefix integrals of tabulated uniform samples, exact for cubics at every
/// node. Full panels use Simpson; the odd in-between points use cubic
/// Newton-Cotes half-panel stencils over four neighboring samples,
///   leading edge:  h ( 9 v0 + 19 v1 -  5 v2 +    v3) / 24
///   interior:      h (-v[-1] + 13 v0 + 13 v1 - v[2]) / 24
///   trailing edge: h ( v[-2] -  5 v[-1] + 19 v0 + 9 v1) / 24.
/// Three samples only admit the quadratic-exact rule h(5 v0 + 8 v1 - v2)/12.
inline std::vector<double> cumulative_simpson_values(const std::vector<double>& v,
                                                     double h) {
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (v[0] + v[1]);
        return out;
    }
    if (n == 3) {
        out[1] = h * (5.0 * v[0] + 8.0 * v[1] - v[2]) / 12.0;
        out[2] = h * (v[0] + 4.0 * v[1] + v[2]) / 3.0;
        return out;
    }
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) {
        if (i + 3 < n)
            out[i + 1] = out[i] + h *
                                      (9.0 * v[i] + 19.0 * v[i + 1] - 5.0 * v[i + 2] +
                                       v[i + 3]) /
                                      24.0;
        else  // last full panel of an odd-count table: lean on the left neighbor
            out[i + 1] = out[i] + h *
                                      (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] -
                                       v[i + 2]) /
                                      24.0;
        out[i + 2] = out[i] + h * (v[i] + 4.0 * v[i + 1] + v[i + 2]) / 3.0;
    }
    if (i + 1 < n)  // even sample count: close with the trailing-edge rule
        out[i + 1] = out[i] + h *
                                  (v[i - 2] - 5.0 * v[i - 1] + 19.0 * v[i] +
                                   9.0 * v[i + 1]) /
                                  24.0;
    return out;
}

}  // namespace motorsim

#endif
