#include "mpe/lagrange.hpp"

#include <stdexcept>

namespace mpe {

namespace {

constexpr double kRefTol = 1e-12;

const Vec2 kGradLambda[3] = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

void check_degree(int degree) {
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("lagrange: degree must be 1 or 2");
}

}  // namespace

int basis_size(int degree) {
  check_degree(degree);
  return degree == 1 ? 3 : 6;
}

std::array<Vec2, 3> reference_nodes_p1() {
  return {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
}

std::array<Vec2, 6> reference_nodes_p2() {
  return {Vec2(0, 0),     Vec2(1, 0),     Vec2(0, 1),
          Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
}

void lagrange_basis_at(int degree, const Vec2& p, double* values, Vec2* gradients) {
  const double lambda[3] = {1.0 - p.x() - p.y(), p.x(), p.y()};
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) {
      values[i] = lambda[i];
      gradients[i] = kGradLambda[i];
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    values[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
    gradients[i] = (4.0 * lambda[i] - 1.0) * kGradLambda[i];
  }
  for (int k = 0; k < 3; ++k) {
    const int a = k, b = (k + 1) % 3;
    values[3 + k] = 4.0 * lambda[a] * lambda[b];
    gradients[3 + k] = 4.0 * (lambda[b] * kGradLambda[a] + lambda[a] * kGradLambda[b]);
  }
}

BasisEval lagrange_basis(int degree, const Vec2& point) {
  check_degree(degree);
  const double l0 = 1.0 - point.x() - point.y();
  if (point.x() < -kRefTol || point.y() < -kRefTol || l0 < -kRefTol)
    throw std::invalid_argument("lagrange_basis: point outside reference triangle");
  BasisEval eval;
  eval.values.resize(basis_size(degree));
  eval.gradients.resize(basis_size(degree));
  lagrange_basis_at(degree, point, eval.values.data(), eval.gradients.data());
  return eval;
}

void lagrange_hessians(int degree, Mat2* hessians) {
  check_degree(degree);
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) hessians[i].setZero();
    return;
  }
  for (int i = 0; i < 3; ++i)
    hessians[i] = 4.0 * kGradLambda[i] * kGradLambda[i].transpose();
  for (int k = 0; k < 3; ++k) {
    const int a = k, b = (k + 1) % 3;
    hessians[3 + k] = 4.0 * (kGradLambda[a] * kGradLambda[b].transpose() +
                             kGradLambda[b] * kGradLambda[a].transpose());
  }
}

}  // namespace mpe
