#include "lzdeg/quadrature_rules.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lzdeg {

std::vector<double> legendre_values(int n, double t) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = t;
  for (int k = 1; k < n; ++k)
    p[static_cast<std::size_t>(k + 1)] =
        ((2.0 * k + 1.0) * t * p[static_cast<std::size_t>(k)] - k * p[static_cast<std::size_t>(k - 1)]) /
        (k + 1.0);
  return p;
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto p = legendre_values(n, t);
      const double pn = p[static_cast<std::size_t>(n)];
      const double pn1 = p[static_cast<std::size_t>(n - 1)];
      dp = n * (t * pn - pn1) / (t * t - 1.0);
      const double dt = pn / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    {
      const auto p = legendre_values(n, t);
      dp = n * (t * p[static_cast<std::size_t>(n)] - p[static_cast<std::size_t>(n - 1)]) / (t * t - 1.0);
    }
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // ascending order
    rule.nodes[static_cast<std::size_t>(i)] = -t;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = t;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace lzdeg
