#include "mpe/estimators.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "mpe/lagrange.hpp"
#include "mpe/quadrature.hpp"

namespace mpe {

namespace {

// Local view of one block field on one element: coefficients, physical
// gradients, and the (constant, affine elements) physical Hessians.
class ElemEval {
 public:
  ElemEval(const DofMap& map, const Eigen::VectorXd& block, int tri)
      : map_(&map), tri_(tri) {
    const int le = map.local_element(tri);
    const int npe = map.nodes_per_element();
    coef_.resize(npe, map.components());
    const int* nodes = map.element_nodes(le);
    for (int i = 0; i < npe; ++i)
      for (int c = 0; c < map.components(); ++c)
        coef_(i, c) = block[map.dof(nodes[i], c)];
    jinv_t_ = map.mesh().jacobian(tri).inverse().transpose();
  }

  int components() const { return map_->components(); }

  void eval_ref(const Vec2& xhat, Eigen::VectorXd& value,
                Eigen::Matrix<double, -1, 2>& grad) const {
    double v[6];
    Vec2 g[6];
    lagrange_basis_at(map_->degree(), xhat, v, g);
    const int npe = map_->nodes_per_element();
    value = Eigen::VectorXd::Zero(components());
    grad = Eigen::Matrix<double, -1, 2>::Zero(components(), 2);
    for (int i = 0; i < npe; ++i) {
      const Vec2 gp = jinv_t_ * g[i];
      for (int c = 0; c < components(); ++c) {
        value[c] += coef_(i, c) * v[i];
        grad.row(c) += coef_(i, c) * gp.transpose();
      }
    }
  }

  void eval_phys(const Vec2& x, Eigen::VectorXd& value,
                 Eigen::Matrix<double, -1, 2>& grad) const {
    eval_ref(map_->mesh().to_reference(tri_, x), value, grad);
  }

  /// Per-component physical Hessians (constant over the element).
  std::vector<Mat2> hessians() const {
    Mat2 href[6];
    lagrange_hessians(map_->degree(), href);
    const int npe = map_->nodes_per_element();
    std::vector<Mat2> h(components(), Mat2::Zero());
    for (int i = 0; i < npe; ++i) {
      const Mat2 hp = jinv_t_ * href[i] * jinv_t_.transpose();
      for (int c = 0; c < components(); ++c) h[c] += coef_(i, c) * hp;
    }
    return h;
  }

 private:
  const DofMap* map_;
  int tri_;
  Eigen::MatrixXd coef_;
  Mat2 jinv_t_;
};

// ∇·σ_P(d) from the constant Hessians: component i is
// μ_el (Δd_i + ∂_i ∇·d) + λ ∂_i ∇·d.
Vec2 div_sigma(const std::vector<Mat2>& hd, const ParameterSet& p) {
  Vec2 out;
  for (int i = 0; i < 2; ++i) {
    const double lap = hd[i].trace();
    const double ddiv = hd[0](i, 0) + hd[1](i, 1);
    out[i] = p.mu_el * (lap + ddiv) + p.lambda * ddiv;
  }
  return out;
}

// ∇·τ_F(u): μ_f (Δu_i + ∂_i ∇·u).
Vec2 div_tau(const std::vector<Mat2>& hu, const ParameterSet& p) {
  Vec2 out;
  for (int i = 0; i < 2; ++i)
    out[i] = p.mu_f * (hu[i].trace() + hu[0](i, 0) + hu[1](i, 1));
  return out;
}

Mat2 to_mat(const Eigen::Matrix<double, -1, 2>& grad) {
  Mat2 g;
  g << grad(0, 0), grad(0, 1), grad(1, 0), grad(1, 1);
  return g;
}

Mat2 stress_elastic(const Eigen::Matrix<double, -1, 2>& grad_d, const ParameterSet& p) {
  const Mat2 g = to_mat(grad_d);
  return 2.0 * p.mu_el * sym(g) + p.lambda * g.trace() * Mat2::Identity();
}

Mat2 stress_fluid(const Eigen::Matrix<double, -1, 2>& grad_u, const ParameterSet& p) {
  return 2.0 * p.mu_f * sym(to_mat(grad_u));
}

double jump_norm2(const Vec2& v, const Vec2& n, JumpVariant variant) {
  if (variant == JumpVariant::Traction) return v.squaredNorm();
  // ‖v⊙n‖²_F = ½(|v|² + (v·n)²)
  const double vn = v.dot(n);
  return 0.5 * (v.squaredNorm() + vn * vn);
}

struct EdgeQuad {
  std::vector<double> s, w;  // on [0,1]
};

EdgeQuad edge_quad(int order) {
  EdgeQuad eq;
  gauss_legendre((order + 2) / 2, eq.s, eq.w);
  return eq;
}

void check_node(const StateTrajectory& traj, int n, int lowest) {
  if (n < lowest || n > traj.grid.num_steps)
    throw std::out_of_range("estimator: time node out of range");
}

using PointVec = std::function<Vec2(const Vec2&)>;
using PointMat = std::function<Mat2(const Vec2&)>;
using PointScalar = std::function<double(const Vec2&)>;

// Momentum-type estimator on one subdomain: bulk residual, flux-jump terms
// and interface residual are bound per element so that E_d, E_d(∂t) and
// E_up share a single traversal.
struct MomentumKernels {
  std::function<PointVec(int tri)> bind_bulk;
  std::function<PointMat(int tri)> bind_flux;
  std::function<PointVec(int tri_own, int tri_other, Vec2 n_own)> bind_interface;
  std::function<PointScalar(int tri)> bind_extra_l2;  // may be empty
};

EstimatorBreakdown momentum_estimator(const Discretization& disc, Subdomain side,
                                      const MomentumKernels& kernels,
                                      const EstimatorOptions& opts) {
  const Mesh& mesh = *disc.mesh;
  const DofMap& map = side == Subdomain::Elastic ? *disc.d_map : *disc.u_map;
  const QuadratureRule rule = quadrature_rule(opts.quad_order);
  const EdgeQuad eq = edge_quad(opts.quad_order);

  EstimatorBreakdown out;
  out.per_element.assign(map.elements().size(), 0.0);

  for (std::size_t e = 0; e < map.elements().size(); ++e) {
    const int tri = map.elements()[e];
    const double detj = 2.0 * mesh.area(tri);
    const double h = mesh.diameter(tri);
    const PointVec bulk = kernels.bind_bulk(tri);
    const PointScalar extra = kernels.bind_extra_l2 ? kernels.bind_extra_l2(tri)
                                                    : PointScalar();
    double acc = 0.0, acc_extra = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = mesh.to_physical(tri, rule.points[q]);
      const double w = rule.weights[q] * detj;
      acc += w * bulk(x).squaredNorm();
      if (extra) {
        const double d = extra(x);
        acc_extra += w * d * d;
      }
    }
    out.per_element[e] += h * h * acc + acc_extra;
  }

  // interior facets: each owner contributes with its own h_K
  const auto& interior = side == Subdomain::Elastic ? disc.facets.interior_elastic
                                                    : disc.facets.interior_fluid;
  for (int fe : interior) {
    const Edge& edge = mesh.edges()[fe];
    const Vec2 a = mesh.vertices()[edge.v[0]];
    const Vec2 b = mesh.vertices()[edge.v[1]];
    const double len = (b - a).norm();
    const Vec2 n = edge.normal;  // outward from owner[0]
    const PointMat flux0 = kernels.bind_flux(edge.owner[0]);
    const PointMat flux1 = kernels.bind_flux(edge.owner[1]);
    double integral = 0.0;
    for (std::size_t q = 0; q < eq.s.size(); ++q) {
      const Vec2 x = a + eq.s[q] * (b - a);
      const Vec2 jump = (flux0(x) - flux1(x)) * n;
      integral += eq.w[q] * len * jump_norm2(jump, n, opts.jump);
    }
    out.per_element[map.local_element(edge.owner[0])] +=
        mesh.diameter(edge.owner[0]) * integral;
    out.per_element[map.local_element(edge.owner[1])] +=
        mesh.diameter(edge.owner[1]) * integral;
  }

  // interface facets, visited from this subdomain's side only
  for (int fe : disc.facets.interface) {
    const Edge& edge = mesh.edges()[fe];
    const int tri_own = side == Subdomain::Elastic ? edge.owner[0] : edge.owner[1];
    const int tri_other = side == Subdomain::Elastic ? edge.owner[1] : edge.owner[0];
    const Vec2 n_own = mesh.outward_normal(fe, tri_own);
    const Vec2 a = mesh.vertices()[edge.v[0]];
    const Vec2 b = mesh.vertices()[edge.v[1]];
    const double len = (b - a).norm();
    const PointVec resid = kernels.bind_interface(tri_own, tri_other, n_own);
    double integral = 0.0;
    for (std::size_t q = 0; q < eq.s.size(); ++q) {
      const Vec2 x = a + eq.s[q] * (b - a);
      integral += eq.w[q] * len * resid(x).squaredNorm();
    }
    out.per_element[map.local_element(tri_own)] += mesh.diameter(tri_own) * integral;
  }

  for (double v : out.per_element) out.total += v;
  return out;
}

// Elastic momentum residual groups for given coefficient blocks and a source
// sample; linear in (d, p_J, f), so difference quotients reuse it verbatim.
EstimatorBreakdown elastic_momentum_estimator(
    const Discretization& disc, const Eigen::VectorXd& d_block,
    const Eigen::VectorXd& pj_block,
    const std::function<Vec2(const Vec2&)>& f_el, const EstimatorOptions& opts) {
  const ParameterSet& params = disc.params;
  const int nj = params.num_networks();

  MomentumKernels kernels;
  kernels.bind_bulk = [&](int tri) -> PointVec {
    auto ed = std::make_shared<ElemEval>(*disc.d_map, d_block, tri);
    auto ep = std::make_shared<ElemEval>(*disc.pj_map, pj_block, tri);
    const Vec2 ds = div_sigma(ed->hessians(), params);
    return [&, ep, ds](const Vec2& x) -> Vec2 {
      Eigen::VectorXd pv;
      Eigen::Matrix<double, -1, 2> pg;
      ep->eval_phys(x, pv, pg);
      Vec2 r = f_el(x) + ds;
      for (int j = 0; j < nj; ++j) r -= params.alpha[j] * pg.row(j).transpose();
      return r;
    };
  };
  kernels.bind_flux = [&](int tri) -> PointMat {
    auto ed = std::make_shared<ElemEval>(*disc.d_map, d_block, tri);
    return [&, ed](const Vec2& x) -> Mat2 {
      Eigen::VectorXd dv;
      Eigen::Matrix<double, -1, 2> dg;
      ed->eval_phys(x, dv, dg);
      return stress_elastic(dg, params);
    };
  };
  kernels.bind_interface = [&](int tri_own, int /*tri_other*/, Vec2 n_el) -> PointVec {
    auto ed = std::make_shared<ElemEval>(*disc.d_map, d_block, tri_own);
    auto ep = std::make_shared<ElemEval>(*disc.pj_map, pj_block, tri_own);
    return [&, ed, ep, n_el](const Vec2& x) -> Vec2 {
      Eigen::VectorXd dv, pv;
      Eigen::Matrix<double, -1, 2> dg, pg;
      ed->eval_phys(x, dv, dg);
      ep->eval_phys(x, pv, pg);
      double alpha_p = 0.0;
      for (int j = 0; j < nj; ++j) alpha_p += params.alpha[j] * pv[j];
      return Vec2(-stress_elastic(dg, params) * n_el + alpha_p * n_el -
                  pv[nj - 1] * n_el);
    };
  };
  return momentum_estimator(disc, Subdomain::Elastic, kernels, opts);
}

}  // namespace

EstimatorBreakdown estimate_E_d(const Discretization& disc, const StateTrajectory& traj,
                                int n, const SourceFields& sources,
                                const EstimatorOptions& opts) {
  check_node(traj, n, 0);
  const double t_n = traj.grid.node(n);
  const Eigen::VectorXd d = traj.d(n);
  const Eigen::VectorXd pj = traj.pj(n);
  std::vector<double> buf(2);
  const auto f_el = [&](const Vec2& x) -> Vec2 {
    sources.f_el(t_n, x, buf);
    return Vec2(buf[0], buf[1]);
  };
  return elastic_momentum_estimator(disc, d, pj, f_el, opts);
}

EstimatorBreakdown estimate_E_d_dt_step(const Discretization& disc,
                                        const StateTrajectory& traj, int n,
                                        const SourceFields& sources,
                                        const EstimatorOptions& opts) {
  check_node(traj, n, 1);
  const double dt = traj.grid.dt;
  const double t_n = traj.grid.node(n), t_p = traj.grid.node(n - 1);
  const Eigen::VectorXd dd = (traj.d(n) - traj.d(n - 1)) / dt;
  const Eigen::VectorXd dpj = (traj.pj(n) - traj.pj(n - 1)) / dt;
  std::vector<double> bn(2), bp(2);
  const auto df_el = [&](const Vec2& x) -> Vec2 {
    sources.f_el(t_n, x, bn);
    sources.f_el(t_p, x, bp);
    return Vec2((bn[0] - bp[0]) / dt, (bn[1] - bp[1]) / dt);
  };
  return elastic_momentum_estimator(disc, dd, dpj, df_el, opts);
}

EDdtAggregate estimate_E_d_dt(const Discretization& disc, const StateTrajectory& traj,
                              const SourceFields& sources,
                              const EstimatorOptions& opts) {
  if (traj.grid.num_steps < 1)
    throw std::out_of_range("estimate_E_d_dt: at least two time nodes required");
  EDdtAggregate out;
  out.per_step.assign(traj.grid.num_steps + 1, 0.0);
  double sqrt_sum = 0.0;
  for (int n = 1; n <= traj.grid.num_steps; ++n) {
    out.per_step[n] = estimate_E_d_dt_step(disc, traj, n, sources, opts).total;
    sqrt_sum += traj.grid.dt * std::sqrt(out.per_step[n]);
  }
  out.total = sqrt_sum * sqrt_sum;
  return out;
}

EstimatorBreakdown estimate_E_J(const Discretization& disc, const StateTrajectory& traj,
                                int n, const SourceFields& sources,
                                const EstimatorOptions& opts) {
  check_node(traj, n, 1);
  const Mesh& mesh = *disc.mesh;
  const ParameterSet& params = disc.params;
  const int nj = params.num_networks();
  const double dt = traj.grid.dt;
  const double t_n = traj.grid.node(n);
  const Eigen::VectorXd pj = traj.pj(n);
  const Eigen::VectorXd dpj = traj.pj(n) - traj.pj(n - 1);
  const Eigen::VectorXd dd = traj.d(n) - traj.d(n - 1);
  const Eigen::VectorXd u = traj.u(n);

  const QuadratureRule rule = quadrature_rule(opts.quad_order);
  const EdgeQuad eq = edge_quad(opts.quad_order);
  const DofMap& map = *disc.pj_map;

  EstimatorBreakdown out;
  out.per_element.assign(map.elements().size(), 0.0);
  std::vector<double> g(nj);

  // bulk: per-network mass-balance residuals
  for (std::size_t e = 0; e < map.elements().size(); ++e) {
    const int tri = map.elements()[e];
    const double detj = 2.0 * mesh.area(tri);
    const double h = mesh.diameter(tri);
    const ElemEval ep(map, pj, tri);
    const ElemEval edp(map, dpj, tri);
    const ElemEval edd(*disc.d_map, dd, tri);
    const auto lap = ep.hessians();  // per network

    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 xhat = rule.points[q];
      const Vec2 x = mesh.to_physical(tri, xhat);
      const double w = rule.weights[q] * detj;
      sources.g(t_n, x, g);
      Eigen::VectorXd pv, dpv, ddv;
      Eigen::Matrix<double, -1, 2> pg, dpg, ddg;
      ep.eval_ref(xhat, pv, pg);
      edp.eval_ref(xhat, dpv, dpg);
      edd.eval_ref(xhat, ddv, ddg);
      const double div_dd = ddg(0, 0) + ddg(1, 1);
      for (int j = 0; j < nj; ++j) {
        double r = g[j] - params.c[j] / dt * dpv[j] +
                   params.kappa[j] / params.mu[j] * lap[j].trace() -
                   params.alpha[j] / dt * div_dd - params.beta_e[j] * pv[j];
        for (int l = 0; l < nj; ++l) r -= params.beta(j, l) * (pv[j] - pv[l]);
        acc += w * r * r;
      }
    }
    out.per_element[e] += h * h * acc;
  }

  // interior facets: normal-flux jumps, one scalar per network
  for (int fe : disc.facets.interior_elastic) {
    const Edge& edge = mesh.edges()[fe];
    const Vec2 a = mesh.vertices()[edge.v[0]];
    const Vec2 b = mesh.vertices()[edge.v[1]];
    const double len = (b - a).norm();
    const Vec2 nrm = edge.normal;
    const ElemEval ep0(map, pj, edge.owner[0]);
    const ElemEval ep1(map, pj, edge.owner[1]);
    double integral = 0.0;
    for (std::size_t q = 0; q < eq.s.size(); ++q) {
      const Vec2 x = a + eq.s[q] * (b - a);
      Eigen::VectorXd v0, v1;
      Eigen::Matrix<double, -1, 2> g0, g1;
      ep0.eval_phys(x, v0, g0);
      ep1.eval_phys(x, v1, g1);
      for (int j = 0; j < nj; ++j) {
        const double jump = params.kappa[j] / params.mu[j] *
                            (g0.row(j) - g1.row(j)).dot(nrm.transpose());
        integral += eq.w[q] * len * jump * jump;
      }
    }
    out.per_element[map.local_element(edge.owner[0])] +=
        mesh.diameter(edge.owner[0]) * integral;
    out.per_element[map.local_element(edge.owner[1])] +=
        mesh.diameter(edge.owner[1]) * integral;
  }

  // interface facets: −Σ_j (κ_j/μ_j)∇p_jⁿ·n_el + δⁿd·n_el + uⁿ·n_f
  for (int fe : disc.facets.interface) {
    const Edge& edge = mesh.edges()[fe];
    const int tri_el = edge.owner[0], tri_f = edge.owner[1];
    const Vec2 n_el = mesh.outward_normal(fe, tri_el);
    const Vec2 a = mesh.vertices()[edge.v[0]];
    const Vec2 b = mesh.vertices()[edge.v[1]];
    const double len = (b - a).norm();
    const ElemEval ep(map, pj, tri_el);
    const ElemEval edd(*disc.d_map, dd, tri_el);
    const ElemEval eu(*disc.u_map, u, tri_f);
    double integral = 0.0;
    for (std::size_t q = 0; q < eq.s.size(); ++q) {
      const Vec2 x = a + eq.s[q] * (b - a);
      Eigen::VectorXd pv, ddv, uv;
      Eigen::Matrix<double, -1, 2> pg, ddg, ug;
      ep.eval_phys(x, pv, pg);
      edd.eval_phys(x, ddv, ddg);
      eu.eval_phys(x, uv, ug);
      double r = (ddv / dt).dot(n_el) - Vec2(uv[0], uv[1]).dot(n_el);  // n_f = −n_el
      for (int j = 0; j < nj; ++j)
        r -= params.kappa[j] / params.mu[j] * pg.row(j).dot(n_el.transpose());
      integral += eq.w[q] * len * r * r;
    }
    out.per_element[map.local_element(tri_el)] += mesh.diameter(tri_el) * integral;
  }

  for (double v : out.per_element) out.total += v;
  return out;
}

EstimatorBreakdown estimate_E_up(const Discretization& disc,
                                 const StateTrajectory& traj, int n,
                                 const SourceFields& sources,
                                 const EstimatorOptions& opts) {
  check_node(traj, n, 0);
  const ParameterSet& params = disc.params;
  const double t_n = traj.grid.node(n);
  const Eigen::VectorXd u = traj.u(n);
  const Eigen::VectorXd p = traj.p(n);
  const Eigen::VectorXd pj = traj.pj(n);
  const int nj = params.num_networks();

  MomentumKernels kernels;
  kernels.bind_bulk = [&](int tri) -> PointVec {
    auto eu = std::make_shared<ElemEval>(*disc.u_map, u, tri);
    auto epr = std::make_shared<ElemEval>(*disc.p_map, p, tri);
    const Vec2 dtau = div_tau(eu->hessians(), params);
    return [&, epr, dtau, t_n](const Vec2& x) -> Vec2 {
      Eigen::VectorXd pv;
      Eigen::Matrix<double, -1, 2> pg;
      epr->eval_phys(x, pv, pg);
      std::vector<double> buf(2);
      sources.f_f(t_n, x, buf);
      return Vec2(buf[0], buf[1]) + dtau - Vec2(pg(0, 0), pg(0, 1));
    };
  };
  kernels.bind_extra_l2 = [&](int tri) -> PointScalar {
    auto eu = std::make_shared<ElemEval>(*disc.u_map, u, tri);
    return [eu](const Vec2& x) -> double {
      Eigen::VectorXd uv;
      Eigen::Matrix<double, -1, 2> ug;
      eu->eval_phys(x, uv, ug);
      return ug(0, 0) + ug(1, 1);
    };
  };
  kernels.bind_flux = [&](int tri) -> PointMat {
    auto eu = std::make_shared<ElemEval>(*disc.u_map, u, tri);
    return [&, eu](const Vec2& x) -> Mat2 {
      Eigen::VectorXd uv;
      Eigen::Matrix<double, -1, 2> ug;
      eu->eval_phys(x, uv, ug);
      return stress_fluid(ug, params);
    };
  };
  kernels.bind_interface = [&](int tri_f, int tri_el, Vec2 n_f) -> PointVec {
    auto eu = std::make_shared<ElemEval>(*disc.u_map, u, tri_f);
    auto epr = std::make_shared<ElemEval>(*disc.p_map, p, tri_f);
    auto epj = std::make_shared<ElemEval>(*disc.pj_map, pj, tri_el);
    return [&, eu, epr, epj, n_f](const Vec2& x) -> Vec2 {
      Eigen::VectorXd uv, pv, pjv;
      Eigen::Matrix<double, -1, 2> ug, pg, pjg;
      eu->eval_phys(x, uv, ug);
      epr->eval_phys(x, pv, pg);
      epj->eval_phys(x, pjv, pjg);
      return Vec2(-stress_fluid(ug, params) * n_f + pv[0] * n_f - pjv[nj - 1] * n_f);
    };
  };
  return momentum_estimator(disc, Subdomain::Fluid, kernels, opts);
}

double eta_time(const Discretization& disc, const StateTrajectory& traj) {
  double total = 0.0;
  for (int n = 1; n <= traj.grid.num_steps; ++n) {
    const Eigen::VectorXd v = traj.pj(n) - traj.pj(n - 1);
    total += traj.grid.dt / 3.0 * v.dot(disc.a_tilde_j * v);
  }
  return total;
}

double eta_time_quadrature(const Discretization& disc, const StateTrajectory& traj,
                           int npoints) {
  std::vector<double> s, w;
  gauss_legendre(npoints, s, w);
  double total = 0.0;
  for (int n = 1; n <= traj.grid.num_steps; ++n) {
    // the deviation from π⁰ is linear on the interval: (1−s)(p^{n−1} − p^n)
    const Eigen::VectorXd jump = traj.pj(n - 1) - traj.pj(n);
    for (int q = 0; q < npoints; ++q) {
      const Eigen::VectorXd v = (1.0 - s[q]) * jump;
      total += traj.grid.dt * w[q] * v.dot(disc.a_tilde_j * v);
    }
  }
  return total;
}

EstimatorReport compute_estimators(const Discretization& disc,
                                   const StateTrajectory& traj,
                                   const SourceFields& sources,
                                   const EstimatorOptions& opts,
                                   const ExactSolution* exact_for_eta_data) {
  const int nt = traj.grid.num_steps;
  const double dt = traj.grid.dt;
  EstimatorReport rep;
  rep.E_d_n.resize(nt + 1);
  rep.E_up_n.resize(nt + 1);
  rep.E_d_dt_n.assign(nt + 1, 0.0);
  rep.E_J_n.assign(nt + 1, 0.0);

  const auto accumulate = [](EstimatorBreakdown& into, const EstimatorBreakdown& from,
                             double weight) {
    if (into.per_element.empty()) into.per_element.assign(from.per_element.size(), 0.0);
    for (std::size_t e = 0; e < from.per_element.size(); ++e)
      into.per_element[e] += weight * from.per_element[e];
  };

  double sqrt_sum = 0.0;
  for (int n = 0; n <= nt; ++n) {
    EstimatorBreakdown bd = estimate_E_d(disc, traj, n, sources, opts);
    rep.E_d_n[n] = bd.total;
    if (bd.total >= rep.E_d) {
      rep.E_d = bd.total;
      rep.breakdown_E_d = std::move(bd);
    }
    EstimatorBreakdown bu = estimate_E_up(disc, traj, n, sources, opts);
    rep.E_up_n[n] = bu.total;
    if (n >= 1) {
      rep.E_up += dt * bu.total;
      accumulate(rep.breakdown_E_up, bu, dt);
    }
  }

  for (int n = 1; n <= nt; ++n) {
    EstimatorBreakdown bddt = estimate_E_d_dt_step(disc, traj, n, sources, opts);
    rep.E_d_dt_n[n] = bddt.total;
    sqrt_sum += dt * std::sqrt(bddt.total);
    accumulate(rep.breakdown_E_d_dt, bddt, dt);

    EstimatorBreakdown bj = estimate_E_J(disc, traj, n, sources, opts);
    rep.E_J_n[n] = bj.total;
    rep.E_J += dt * bj.total;
    accumulate(rep.breakdown_E_J, bj, dt);
  }
  rep.E_d_dt = sqrt_sum * sqrt_sum;
  for (auto* bd : {&rep.breakdown_E_d_dt, &rep.breakdown_E_J, &rep.breakdown_E_up}) {
    bd->total = 0.0;
    for (double v : bd->per_element) bd->total += v;
  }

  rep.eta_time = eta_time(disc, traj);
  rep.eta_ok = rep.E_d + rep.E_d_dt + rep.E_J + rep.E_up;
  if (exact_for_eta_data) {
    rep.eta_data = eta_data_initial_terms(disc, traj, *exact_for_eta_data);
    rep.eta_data_computed = true;
  }
  return rep;
}

}  // namespace mpe
