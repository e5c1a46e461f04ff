#pragma once

#include <vector>

#include "mpe/geometry.hpp"

namespace mpe {

/// Quadrature on the unit reference triangle {x,y ≥ 0, x+y ≤ 1}.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2
  int exactness_degree = 0;
};

/// Rule exact for all polynomials of total degree ≤ order (1 ≤ order ≤ 10),
/// built as a conical product of Gauss–Legendre rules.
QuadratureRule quadrature_rule(int order);

/// Gauss–Legendre points/weights on [0,1], exact to degree 2n−1.
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

}  // namespace mpe
