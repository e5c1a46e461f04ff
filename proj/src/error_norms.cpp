#include "mpe/error_norms.hpp"

#include <algorithm>
#include <cmath>

#include "mpe/estimators.hpp"
#include "mpe/lagrange.hpp"
#include "mpe/quadrature.hpp"

namespace mpe {

namespace {

// Quadrature of a pointwise energy density over one subdomain's elements.
// The callback receives element, physical point, discrete value/gradient.
template <typename Density>
double integrate_energy(const Discretization& disc, const DofMap& map,
                        const Eigen::VectorXd& coeffs, Density&& density) {
  const Mesh& mesh = *disc.mesh;
  const QuadratureRule rule = quadrature_rule(disc.quad_order);
  const int npe = map.nodes_per_element();
  const int nc = map.components();
  double total = 0.0;

  std::vector<double> bv(npe);
  std::vector<Vec2> bg(npe);
  Eigen::VectorXd value(nc);
  Eigen::Matrix<double, -1, 2> grad(nc, 2);

  for (std::size_t e = 0; e < map.elements().size(); ++e) {
    const int tri = map.elements()[e];
    const double detj = 2.0 * mesh.area(tri);
    const Mat2 jinv_t = mesh.jacobian(tri).inverse().transpose();
    const int* nodes = map.element_nodes(static_cast<int>(e));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      lagrange_basis_at(map.degree(), rule.points[q], bv.data(), bg.data());
      value.setZero();
      grad.setZero();
      for (int i = 0; i < npe; ++i) {
        const Vec2 g = jinv_t * bg[i];
        for (int c = 0; c < nc; ++c) {
          const double coef = coeffs[map.dof(nodes[i], c)];
          value[c] += coef * bv[i];
          grad.row(c) += coef * g.transpose();
        }
      }
      const Vec2 x = mesh.to_physical(tri, rule.points[q]);
      total += rule.weights[q] * detj * density(x, value, grad);
    }
  }
  return total;
}

}  // namespace

double a_el_energy_error(const Discretization& disc, const Eigen::VectorXd& d_coeffs,
                         const ExactSolution* exact, double t) {
  const ParameterSet& p = disc.params;
  return integrate_energy(
      disc, *disc.d_map, d_coeffs,
      [&](const Vec2& x, const Eigen::VectorXd&, const Eigen::Matrix<double, -1, 2>& g) {
        Mat2 gd;
        gd << g(0, 0), g(0, 1), g(1, 0), g(1, 1);
        if (exact) gd -= exact->displacement_grad(t, x);
        const Mat2 eps = sym(gd);
        const double div = gd.trace();
        return 2.0 * p.mu_el * eps.squaredNorm() + p.lambda * div * div;
      });
}

double a_f_energy_error(const Discretization& disc, const Eigen::VectorXd& u_coeffs,
                        const ExactSolution* exact, double t) {
  const ParameterSet& p = disc.params;
  return integrate_energy(
      disc, *disc.u_map, u_coeffs,
      [&](const Vec2& x, const Eigen::VectorXd&, const Eigen::Matrix<double, -1, 2>& g) {
        Mat2 gu;
        gu << g(0, 0), g(0, 1), g(1, 0), g(1, 1);
        if (exact) gu -= exact->velocity_grad(t, x);
        return 2.0 * p.mu_f * sym(gu).squaredNorm();
      });
}

double m_j_energy_error(const Discretization& disc, const Eigen::VectorXd& pj_coeffs,
                        const ExactSolution* exact, double t) {
  const ParameterSet& p = disc.params;
  const int nj = p.num_networks();
  std::vector<double> pe(nj);
  return integrate_energy(
      disc, *disc.pj_map, pj_coeffs,
      [&](const Vec2& x, const Eigen::VectorXd& v, const Eigen::Matrix<double, -1, 2>&) {
        if (exact) exact->pressures(t, x, pe);
        double acc = 0.0;
        for (int j = 0; j < nj; ++j) {
          const double e = exact ? v[j] - pe[j] : v[j];
          acc += p.c[j] * e * e;
        }
        return acc;
      });
}

double a_tilde_j_energy_error(const Discretization& disc,
                              const Eigen::VectorXd& pj_coeffs,
                              const ExactSolution* exact, double t) {
  const ParameterSet& p = disc.params;
  const int nj = p.num_networks();
  std::vector<double> pe(nj);
  std::vector<Vec2> ge(nj);
  return integrate_energy(
      disc, *disc.pj_map, pj_coeffs,
      [&](const Vec2& x, const Eigen::VectorXd& v,
          const Eigen::Matrix<double, -1, 2>& g) {
        if (exact) {
          exact->pressures(t, x, pe);
          exact->pressure_grads(t, x, ge);
        }
        double acc = 0.0;
        for (int j = 0; j < nj; ++j) {
          Vec2 gj = g.row(j).transpose();
          double vj = v[j];
          if (exact) {
            gj -= ge[j];
            vj -= pe[j];
          }
          acc += p.kappa[j] / p.mu[j] * gj.squaredNorm() + p.beta_e[j] * vj * vj;
          for (int k = 0; k < nj; ++k) {
            if (k == j) continue;
            const double vk = exact ? v[k] - pe[k] : v[k];
            acc += p.beta(k, j) * (vj - vk) * vj;
          }
        }
        return acc;
      });
}

double div_u_l2_squared(const Discretization& disc, const Eigen::VectorXd& u_coeffs) {
  return integrate_energy(
      disc, *disc.u_map, u_coeffs,
      [&](const Vec2&, const Eigen::VectorXd&, const Eigen::Matrix<double, -1, 2>& g) {
        const double div = g(0, 0) + g(1, 1);
        return div * div;
      });
}

ErrorReport error_norms(const Discretization& disc, const StateTrajectory& traj,
                        const ExactSolution& exact, double eta_ok) {
  ErrorReport rep;
  const int nt = traj.grid.num_steps;
  const double dt = traj.grid.dt;

  for (int n = 0; n <= nt; ++n) {
    const double t = traj.grid.node(n);
    rep.err_d_linf =
        std::max(rep.err_d_linf, a_el_energy_error(disc, traj.d(n), &exact, t));
    rep.err_J_linf =
        std::max(rep.err_J_linf, m_j_energy_error(disc, traj.pj(n), &exact, t));
  }

  std::vector<double> gs, gw;
  gauss_legendre(2, gs, gw);
  for (int n = 1; n <= nt; ++n) {
    for (std::size_t q = 0; q < gs.size(); ++q) {
      const double s = gs[q];
      const double t = traj.grid.node(n - 1) + s * dt;
      const Eigen::VectorXd u = (1.0 - s) * traj.u(n - 1) + s * traj.u(n);
      const Eigen::VectorXd pj = (1.0 - s) * traj.pj(n - 1) + s * traj.pj(n);
      const double w = dt * gw[q];
      rep.err_u_l2 += w * a_f_energy_error(disc, u, &exact, t);
      rep.err_J_l2 += w * a_tilde_j_energy_error(disc, pj, &exact, t);
      rep.div_u_l2 += w * div_u_l2_squared(disc, u);
    }
  }

  rep.err_e = rep.err_d_linf + rep.err_J_linf + rep.err_u_l2 + rep.err_J_l2;
  rep.i_eff = rep.err_e > 0.0 ? eta_ok / rep.err_e : 0.0;
  return rep;
}

double eta_data_initial_terms(const Discretization& disc, const StateTrajectory& traj,
                              const ExactSolution& exact) {
  return a_el_energy_error(disc, traj.d(0), &exact, 0.0) +
         a_f_energy_error(disc, traj.u(0), &exact, 0.0) +
         a_tilde_j_energy_error(disc, traj.pj(0), &exact, 0.0);
}

}  // namespace mpe
