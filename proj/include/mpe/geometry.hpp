#pragma once

#include <Eigen/Dense>

namespace mpe {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// symmetric gradient ε(φ) = ½(∇φ + ∇φᵀ)
inline Mat2 sym(const Mat2& g) { return 0.5 * (g + g.transpose()); }

}  // namespace mpe
