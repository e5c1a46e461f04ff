#pragma once

#include <array>
#include <vector>

#include "mpe/geometry.hpp"

namespace mpe {

/// Nodal Lagrange basis of degree 1 or 2 on the unit reference triangle.
/// Nodes: vertices (0,0),(1,0),(0,1); degree 2 adds the three edge midpoints,
/// node 3+k on local edge k = (v_k, v_{k+1}).
struct BasisEval {
  std::vector<double> values;
  std::vector<Vec2> gradients;
};

int basis_size(int degree);  // 3 or 6

std::array<Vec2, 3> reference_nodes_p1();
std::array<Vec2, 6> reference_nodes_p2();

/// Values and reference gradients at a point (must lie in the reference
/// triangle up to tolerance 1e-12).
BasisEval lagrange_basis(int degree, const Vec2& point);

/// In-place evaluation without the containment check; used by quadrature loops.
void lagrange_basis_at(int degree, const Vec2& point, double* values, Vec2* gradients);

/// Reference Hessians (constant over the element for degree ≤ 2).
void lagrange_hessians(int degree, Mat2* hessians);

}  // namespace mpe
