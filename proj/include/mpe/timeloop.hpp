#pragma once

#include <vector>

#include "mpe/system.hpp"

namespace mpe {

/// Uniform grid t^n = n·Δt, n = 0..N_T. Requires T/Δt integral.
struct TimeGrid {
  double t_final;
  double dt;
  int num_steps;

  TimeGrid(double t_final, double dt);
  double node(int n) const { return n * dt; }
};

/// Node values of the fully discrete trajectory, interpreted as piecewise
/// linear in time. Node 0 holds interpolated initial data (or the warm-up
/// solve, see TimeLoopOptions).
struct StateTrajectory {
  TimeGrid grid;
  BlockLayout layout;
  std::vector<Eigen::VectorXd> states;  // size num_steps + 1
  int num_solves = 0;

  // per-step diagnostics, index 0 used only by the warm-up solve
  std::vector<double> solver_residuals;
  std::vector<double> galerkin_residuals;

  Eigen::VectorXd d(int n) const { return states[n].segment(layout.offset_d(), layout.n_d); }
  Eigen::VectorXd pj(int n) const { return states[n].segment(layout.offset_pj(), layout.n_pj); }
  Eigen::VectorXd u(int n) const { return states[n].segment(layout.offset_u(), layout.n_u); }
  Eigen::VectorXd p(int n) const { return states[n].segment(layout.offset_p(), layout.n_p); }

  double max_solver_residual() const;
  double max_galerkin_residual() const;
};

/// max_i |(b − A x)_i| / ‖b‖₂ over unconstrained dofs of the pre-constraint
/// system (the discrete form of the Galerkin-orthogonality property).
double galerkin_orthogonality_residual(const AssembledSystem& system,
                                       const Eigen::VectorXd& solution);

struct TimeLoopOptions {
  /// Replace the interpolated initial state by one warm-up solve (previous
  /// state interpolated at t = −Δt, step taken to t = 0). The state at node 0
  /// then satisfies the quasi-static rows of the scheme, so the step-1
  /// difference quotients in the residual estimators measure time variation
  /// instead of the interpolant-to-Galerkin gap scaled by 1/Δt.
  bool consistent_initial_state = false;
};

/// Implicit-Euler loop: one factorization (the matrix is time-independent),
/// per-step rhs assembly, constraint application, and direct solves.
StateTrajectory run_time_loop(const Discretization& disc, const TimeGrid& grid,
                              const SourceFields& sources, const InitialFields& initial,
                              const BoundaryFields& boundary,
                              const TimeLoopOptions& options = {});

}  // namespace mpe
