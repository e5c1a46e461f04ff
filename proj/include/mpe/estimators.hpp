#pragma once

#include <vector>

#include "mpe/timeloop.hpp"

namespace mpe {

/// Norm used for the vector-valued face residuals: the plain traction-vector
/// jump ‖(σ⁺−σ⁻)n_F‖, or the Frobenius norm of its symmetrized outer product
/// with n_F. The two differ per face by at most a factor √2.
enum class JumpVariant { Traction, Symmetric };

struct EstimatorOptions {
  JumpVariant jump = JumpVariant::Traction;
  int quad_order = kDefaultQuadOrder;
};

/// A squared local estimator: per-element contributions (indexed by the local
/// element numbering of the owning subdomain) and their sum.
struct EstimatorBreakdown {
  double total = 0.0;
  std::vector<double> per_element;
};

/// ℰ_dⁿ: elastic bulk residuals h_K²‖R_d‖², interior traction jumps and
/// interface stress residuals, each weighted by the owning element's h_K.
EstimatorBreakdown estimate_E_d(const Discretization& disc, const StateTrajectory& traj,
                                int n, const SourceFields& sources,
                                const EstimatorOptions& opts = {});

/// ℰ_dⁿ(∂t): same structure with every residual replaced by its backward
/// difference quotient over step n ≥ 1.
EstimatorBreakdown estimate_E_d_dt_step(const Discretization& disc,
                                        const StateTrajectory& traj, int n,
                                        const SourceFields& sources,
                                        const EstimatorOptions& opts = {});

/// ℰ_d(∂t) = [Σ_n Δt (ℰ_dⁿ(∂t))^{1/2}]² with the per-step values
/// (index 0 unused). Requires at least two time nodes.
struct EDdtAggregate {
  double total = 0.0;
  std::vector<double> per_step;
};
EDdtAggregate estimate_E_d_dt(const Discretization& disc, const StateTrajectory& traj,
                              const SourceFields& sources,
                              const EstimatorOptions& opts = {});

/// ℰ_Jⁿ (n ≥ 1): network mass-balance residuals with the δⁿd divergence and
/// exchange terms, flux jumps, and the normal-flux interface residual.
EstimatorBreakdown estimate_E_J(const Discretization& disc, const StateTrajectory& traj,
                                int n, const SourceFields& sources,
                                const EstimatorOptions& opts = {});

/// ℰ_upⁿ: Stokes momentum residuals, the unweighted ‖∇·uⁿ‖² term, viscous
/// traction jumps, and the interface stress residual on the fluid side.
EstimatorBreakdown estimate_E_up(const Discretization& disc,
                                 const StateTrajectory& traj, int n,
                                 const SourceFields& sources,
                                 const EstimatorOptions& opts = {});

/// η_time = Σ_n (Δt/3)·‖p_Jⁿ − p_J^{n−1}‖²_{V_J} (exact closed form; the
/// deviation from π⁰ is linear on each interval and vanishes at the right node).
double eta_time(const Discretization& disc, const StateTrajectory& traj);

/// The same quantity by Gauss quadrature in time (npoints per interval),
/// evaluating the piecewise-linear reconstruction directly.
double eta_time_quadrature(const Discretization& disc, const StateTrajectory& traj,
                           int npoints = 4);

/// The three initial-condition terms of the data estimator (the source
/// oscillation terms involve dual norms and are not computed; the
/// convergence study neglects η_data entirely).
double eta_data_initial_terms(const Discretization& disc, const StateTrajectory& traj,
                              const ExactSolution& exact);

/// All estimator quantities computable from one trajectory.
/// η_ok = ℰ_d + ℰ_d(∂t) + ℰ_J + ℰ_up; η_time and η_data stay separate.
struct EstimatorReport {
  std::vector<double> E_d_n;     // nodes 0..N_T
  std::vector<double> E_d_dt_n;  // steps 1..N_T (index 0 unused)
  std::vector<double> E_J_n;     // steps 1..N_T (index 0 unused)
  std::vector<double> E_up_n;    // nodes 0..N_T; the aggregate uses 1..N_T

  double E_d = 0.0;     // sup_n E_d_n
  double E_d_dt = 0.0;  // [Σ Δt √(E_d_dt_n)]²
  double E_J = 0.0;     // Σ Δt E_J_n
  double E_up = 0.0;    // Σ Δt E_up_n
  double eta_time = 0.0;
  double eta_ok = 0.0;

  double eta_data = 0.0;  // three IC terms, only when requested
  bool eta_data_computed = false;

  // spatial maps: E_d at its sup-attaining node, the others Δt-weighted sums
  EstimatorBreakdown breakdown_E_d, breakdown_E_d_dt, breakdown_E_J, breakdown_E_up;
};

EstimatorReport compute_estimators(const Discretization& disc,
                                   const StateTrajectory& traj,
                                   const SourceFields& sources,
                                   const EstimatorOptions& opts = {},
                                   const ExactSolution* exact_for_eta_data = nullptr);

}  // namespace mpe
