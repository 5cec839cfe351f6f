#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mk {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [a, b]; nodes by Newton iteration on
/// P_n starting from the Chebyshev-like guess cos(pi (i + 3/4) / (n + 1/2)).
inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (x * p0 - p1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        q.nodes[lo] = mid - half * x;
        q.nodes[hi] = mid + half * x;
        q.weights[lo] = half * w;
        q.weights[hi] = half * w;
    }
    return q;
}

/// Periodic trapezoid rule on [0, 2 pi).
inline QuadratureRule periodic_trapezoid(int n) {
    if (n < 1) throw std::invalid_argument("periodic_trapezoid: need at least one node");
    QuadratureRule q;
    for (int j = 0; j < n; ++j) {
        q.nodes.push_back(2.0 * std::numbers::pi * j / n);
        q.weights.push_back(2.0 * std::numbers::pi / n);
    }
    return q;
}

}  // namespace mk
