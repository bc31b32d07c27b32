#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "imcf/errors.hpp"

namespace imcf {

struct GaussLegendre {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule of order n by Newton iteration on the three-term recurrence.
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("gauss_legendre: order must be positive");
  GaussLegendre rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

/// Composite Gauss-Legendre integral of f over [a, b].
template <class F>
double integrate_gl(F&& f, double a, double b, int panels = 32, int order = 10) {
  static thread_local GaussLegendre cached;
  if (static_cast<int>(cached.nodes.size()) != order) cached = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t k = 0; k < cached.nodes.size(); ++k) {
      total += cached.weights[k] * f(mid + 0.5 * h * cached.nodes[k]);
    }
  }
  return 0.5 * h * total;
}

}  // namespace imcf
