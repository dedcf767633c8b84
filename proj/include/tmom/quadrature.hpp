#pragma once

/// Gaussian-weighted quadrature built from panelised Gauss-Legendre rules.
/// Integrands may have known break points (kinks or jumps, e.g. from a
/// double-step position function); panels are split there so each panel sees
/// a smooth integrand. Convergence is assessed by doubling the panel count.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tmom/gaussian.hpp"

namespace tmom {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

/// Nodes/weights by Newton iteration on the Legendre polynomial.
inline GaussLegendreRule gauss_legendre(int n) {
    GaussLegendreRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

inline const GaussLegendreRule& gl16() {
    static const GaussLegendreRule r = gauss_legendre(16);
    return r;
}

} // namespace detail

/// Integral of f over [lo, hi] with panels split at `breaks`; each base panel
/// is subdivided 2^level times and integrated with 16-point Gauss-Legendre.
template <class F>
double panel_integral(F&& f, double lo, double hi,
                      const std::vector<double>& breaks, int level) {
    std::vector<double> edges{lo, hi};
    for (double b : breaks)
        if (b > lo && b < hi) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    const auto& rule = detail::gl16();
    const int sub = 1 << level;
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double w = (edges[e + 1] - edges[e]) / sub;
        for (int s = 0; s < sub; ++s) {
            const double a = edges[e] + s * w;
            const double mid = a + 0.5 * w, half = 0.5 * w;
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
            total += acc * half;
        }
    }
    return total;
}

/// E[f(Z)] for Z ~ N(0,1), with optional integrand break points. Panel count
/// is doubled until two successive levels agree to `tol`; failure to settle
/// is reported as a QuadratureError.
template <class F>
double normal_expectation(F&& f, const std::vector<double>& breaks = {},
                          double tol = 1e-10, double span = 9.0) {
    auto g = [&](double z) { return f(z) * normal_pdf(z); };
    double prev = panel_integral(g, -span, span, breaks, 0);
    for (int level = 1; level <= 9; ++level) {
        double cur = panel_integral(g, -span, span, breaks, level);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    throw QuadratureError("normal_expectation: no convergence under node doubling");
}

} // namespace tmom
