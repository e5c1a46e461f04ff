#include "mpe/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mpe/solver.hpp"

namespace mpe {

TimeGrid::TimeGrid(double t_final, double dt) : t_final(t_final), dt(dt) {
  if (t_final <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("TimeGrid: t_final and dt must be positive");
  const double ratio = t_final / dt;
  num_steps = static_cast<int>(std::llround(ratio));
  if (num_steps < 1 || std::abs(ratio - num_steps) > 1e-10 * ratio)
    throw std::invalid_argument("TimeGrid: t_final must be an integer multiple of dt");
}

double StateTrajectory::max_solver_residual() const {
  double r = 0.0;
  for (double v : solver_residuals) r = std::max(r, v);
  return r;
}

double StateTrajectory::max_galerkin_residual() const {
  double r = 0.0;
  for (double v : galerkin_residuals) r = std::max(r, v);
  return r;
}

double galerkin_orthogonality_residual(const AssembledSystem& sys,
                                       const Eigen::VectorXd& solution) {
  const Eigen::VectorXd r =
      sys.rhs_unconstrained - sys.matrix_unconstrained * solution;
  std::vector<char> constrained(sys.layout.total(), 0);
  for (int i : sys.dirichlet_dofs) constrained[i] = 1;
  double rmax = 0.0;
  for (int i = 0; i < r.size(); ++i)
    if (!constrained[i]) rmax = std::max(rmax, std::abs(r[i]));
  const double bnorm = sys.rhs_unconstrained.norm();
  return bnorm > 0.0 ? rmax / bnorm : rmax;
}

StateTrajectory run_time_loop(const Discretization& disc, const TimeGrid& grid,
                              const SourceFields& sources, const InitialFields& initial,
                              const BoundaryFields& boundary,
                              const TimeLoopOptions& options) {
  const BlockLayout& L = disc.layout;
  StateTrajectory traj{grid, L, {}, 0, {}, {}};
  traj.states.reserve(grid.num_steps + 1);
  traj.solver_residuals.assign(grid.num_steps + 1, 0.0);
  traj.galerkin_residuals.assign(grid.num_steps + 1, 0.0);

  const auto interpolate_all = [&](double t) {
    Eigen::VectorXd s(L.total());
    s.segment(L.offset_d(), L.n_d) = interpolate_nodal(initial.d, *disc.d_map, t);
    s.segment(L.offset_pj(), L.n_pj) = interpolate_nodal(initial.pj, *disc.pj_map, t);
    s.segment(L.offset_u(), L.n_u) = interpolate_nodal(initial.u, *disc.u_map, t);
    s.segment(L.offset_p(), L.n_p) = interpolate_nodal(initial.p, *disc.p_map, t);
    return s;
  };

  // The constrained matrix is the same at every step; factorize once and
  // rebuild only the right-hand side.
  std::unique_ptr<SparseSolver> solver;
  const auto take_step = [&](const Eigen::VectorXd& prev, int n) {
    const double t_n = grid.node(n);
    AssembledSystem sys = assemble_step_system(disc, prev, grid.dt, t_n, sources);
    apply_dirichlet(sys, boundary, t_n, disc);
    try {
      if (!solver) solver = std::make_unique<SparseSolver>(sys.matrix);
      Eigen::VectorXd x = solver->solve(sys.rhs);
      traj.solver_residuals[std::max(n, 0)] = solver->last_relative_residual();
      traj.galerkin_residuals[std::max(n, 0)] = galerkin_orthogonality_residual(sys, x);
      ++traj.num_solves;
      return x;
    } catch (const std::runtime_error& err) {
      throw std::runtime_error("run_time_loop: step " + std::to_string(n) + ": " +
                               err.what());
    }
  };

  if (options.consistent_initial_state)
    traj.states.push_back(take_step(interpolate_all(-grid.dt), 0));
  else
    traj.states.push_back(interpolate_all(0.0));

  for (int n = 1; n <= grid.num_steps; ++n)
    traj.states.push_back(take_step(traj.states[n - 1], n));
  return traj;
}

}  // namespace mpe
