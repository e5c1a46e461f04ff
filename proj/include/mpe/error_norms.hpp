#pragma once

#include "mpe/timeloop.hpp"

namespace mpe {

/// Energy norms of the discretization error against a closed-form solution,
/// in the norms induced by a_el, m_J, a_f, ã_J. L∞-in-time terms are maxima
/// over the time nodes; L²-in-time terms use 2-point Gauss quadrature per
/// interval with the discrete trajectory reconstructed linearly in time.
struct ErrorReport {
  double err_d_linf = 0.0;  // sup_n a_el(e_d, e_d)
  double err_J_linf = 0.0;  // sup_n m_J(e_J, e_J)
  double err_u_l2 = 0.0;    // ∫ a_f(e_u, e_u) dt
  double err_J_l2 = 0.0;    // ∫ ã_J(e_J, e_J) dt
  double err_e = 0.0;       // sum of the four terms
  double div_u_l2 = 0.0;    // ∫ ‖∇·u_h‖²_{Ω_f} dt
  double i_eff = 0.0;       // eta_ok / err_e (0 when err_e = 0)
};

ErrorReport error_norms(const Discretization& disc, const StateTrajectory& traj,
                        const ExactSolution& exact, double eta_ok);

/// Squared energy of (w_h − w(t,·)) for one field; pass exact = nullptr for
/// the plain discrete energy. Coefficients are a full block vector of the
/// field's dof map (already reconstructed in time by the caller).

double a_el_energy_error(const Discretization& disc, const Eigen::VectorXd& d_coeffs,
                         const ExactSolution* exact, double t);
double a_f_energy_error(const Discretization& disc, const Eigen::VectorXd& u_coeffs,
                        const ExactSolution* exact, double t);
double m_j_energy_error(const Discretization& disc, const Eigen::VectorXd& pj_coeffs,
                        const ExactSolution* exact, double t);
double a_tilde_j_energy_error(const Discretization& disc,
                              const Eigen::VectorXd& pj_coeffs,
                              const ExactSolution* exact, double t);
double div_u_l2_squared(const Discretization& disc, const Eigen::VectorXd& u_coeffs);

}  // namespace mpe
