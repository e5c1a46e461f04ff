#include "mpe/solver.hpp"

#include <stdexcept>

namespace mpe {

SparseSolver::SparseSolver(const SparseMat& matrix) : matrix_(matrix) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("SparseSolver: matrix must be square");
  matrix_.makeCompressed();
  lu_.analyzePattern(matrix_);
  lu_.factorize(matrix_);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("SparseSolver: matrix is singular or factorization failed");
}

Eigen::VectorXd SparseSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != matrix_.rows())
    throw std::invalid_argument("SparseSolver: rhs size mismatch");
  Eigen::VectorXd x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("SparseSolver: solve failed");
  const double bnorm = rhs.norm();
  const double rnorm = (matrix_ * x - rhs).norm();
  last_residual_ = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  return x;
}

Eigen::VectorXd sparse_solve(const SparseMat& matrix, const Eigen::VectorXd& rhs,
                             double* residual) {
  SparseSolver solver(matrix);
  Eigen::VectorXd x = solver.solve(rhs);
  if (residual) *residual = solver.last_relative_residual();
  return x;
}

}  // namespace mpe
