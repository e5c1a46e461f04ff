#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mpe/forms.hpp"

namespace mpe {

/// Sparse LU (partial pivoting, COLAMD ordering) with a reusable
/// factorization. Throws std::runtime_error on singular input.
class SparseSolver {
 public:
  explicit SparseSolver(const SparseMat& matrix);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// ‖Ax − b‖₂ / ‖b‖₂ of the last solve (absolute norm for b = 0).
  double last_relative_residual() const { return last_residual_; }

 private:
  SparseMat matrix_;
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu_;
  mutable double last_residual_ = 0.0;
};

/// Factorize-and-solve convenience wrapper. The relative residual is written
/// to `residual` when provided.
Eigen::VectorXd sparse_solve(const SparseMat& matrix, const Eigen::VectorXd& rhs,
                             double* residual = nullptr);

}  // namespace mpe
