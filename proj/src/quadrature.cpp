#include "mpe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mpe {

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.resize(n);
  weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n, starting from the Chebyshev-like estimate.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // map from [-1,1] to [0,1]
    points[i] = 0.5 * (1.0 - z);
    points[n - 1 - i] = 0.5 * (1.0 + z);
    const double w = 1.0 / ((1.0 - z * z) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadratureRule quadrature_rule(int order) {
  if (order < 1 || order > 10)
    throw std::invalid_argument("quadrature_rule: order must be in [1,10]");

  // Collapsed-square rule: x = ξ, y = (1−ξ)η, Jacobian (1−ξ). The integrand of
  // total degree p becomes degree ≤ p+1 in ξ, so m-point GL needs 2m−1 ≥ p+1.
  const int m = (order + 3) / 2;
  std::vector<double> gp, gw;
  gauss_legendre(m, gp, gw);

  QuadratureRule rule;
  rule.exactness_degree = order;
  rule.points.reserve(static_cast<std::size_t>(m) * m);
  rule.weights.reserve(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double xi = gp[i], eta = gp[j];
      rule.points.emplace_back(xi, (1.0 - xi) * eta);
      rule.weights.push_back(gw[i] * gw[j] * (1.0 - xi));
    }
  }
  return rule;
}

}  // namespace mpe
