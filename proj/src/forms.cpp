#include "mpe/forms.hpp"

#include <stdexcept>
#include <vector>

#include "mpe/lagrange.hpp"
#include "mpe/quadrature.hpp"

namespace mpe {

namespace {

struct QuadBasis {
  QuadratureRule rule;
  std::vector<std::vector<double>> values;     // [q][i]
  std::vector<std::vector<Vec2>> ref_grads;    // [q][i]
};

QuadBasis tabulate(int degree, int quad_order) {
  QuadBasis qb;
  qb.rule = quadrature_rule(quad_order);
  const int n = basis_size(degree);
  qb.values.resize(qb.rule.points.size());
  qb.ref_grads.resize(qb.rule.points.size());
  for (std::size_t q = 0; q < qb.rule.points.size(); ++q) {
    qb.values[q].resize(n);
    qb.ref_grads[q].resize(n);
    lagrange_basis_at(degree, qb.rule.points[q], qb.values[q].data(),
                      qb.ref_grads[q].data());
  }
  return qb;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void validate_form_maps(FormId id, const DofMap& trial, const DofMap& test,
                        const ParameterSet& params) {
  const int nj = params.num_networks();
  switch (id) {
    case FormId::AEl:
      require(trial.subdomain() == Subdomain::Elastic &&
                  test.subdomain() == Subdomain::Elastic,
              "assemble_form: a_el lives on the elastic subdomain");
      require(trial.components() == 2 && test.components() == 2,
              "assemble_form: a_el needs vector maps");
      break;
    case FormId::AF:
      require(trial.subdomain() == Subdomain::Fluid &&
                  test.subdomain() == Subdomain::Fluid,
              "assemble_form: a_f lives on the fluid subdomain");
      require(trial.components() == 2 && test.components() == 2,
              "assemble_form: a_f needs vector maps");
      break;
    case FormId::MJ:
    case FormId::ATildeJ:
      require(trial.subdomain() == Subdomain::Elastic &&
                  test.subdomain() == Subdomain::Elastic,
              "assemble_form: network forms live on the elastic subdomain");
      require(trial.components() == nj && test.components() == nj,
              "assemble_form: network forms need #J components");
      break;
    case FormId::BJ:
      require(trial.subdomain() == Subdomain::Elastic &&
                  test.subdomain() == Subdomain::Elastic,
              "assemble_form: b_J lives on the elastic subdomain");
      require(trial.components() == nj && test.components() == 2,
              "assemble_form: b_J pairs network pressures with displacements");
      break;
    case FormId::BF:
      require(trial.subdomain() == Subdomain::Fluid &&
                  test.subdomain() == Subdomain::Fluid,
              "assemble_form: b_f lives on the fluid subdomain");
      require(trial.components() == 1 && test.components() == 2,
              "assemble_form: b_f pairs the pressure with velocities");
      break;
  }
}

}  // namespace

SparseMat assemble_form(FormId id, const DofMap& trial, const DofMap& test,
                        const ParameterSet& params, int quad_order) {
  validate_form_maps(id, trial, test, params);
  const Mesh& mesh = trial.mesh();
  const QuadBasis trial_qb = tabulate(trial.degree(), quad_order);
  const QuadBasis test_qb = tabulate(test.degree(), quad_order);
  const int nq = static_cast<int>(trial_qb.rule.points.size());
  const int npe_a = trial.nodes_per_element();
  const int npe_b = test.nodes_per_element();
  const int nj = params.num_networks();

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Vec2> ga(npe_a), gb(npe_b);

  for (std::size_t e = 0; e < trial.elements().size(); ++e) {
    const int t = trial.elements()[e];
    const int e_test = test.local_element(t);
    const Mat2 jinv_t = mesh.jacobian(t).inverse().transpose();
    const double detj = 2.0 * mesh.area(t);
    const int* na = trial.element_nodes(static_cast<int>(e));
    const int* nb = test.element_nodes(e_test);

    for (int q = 0; q < nq; ++q) {
      const double w = trial_qb.rule.weights[q] * detj;
      for (int i = 0; i < npe_a; ++i) ga[i] = jinv_t * trial_qb.ref_grads[q][i];
      for (int i = 0; i < npe_b; ++i) gb[i] = jinv_t * test_qb.ref_grads[q][i];

      for (int b = 0; b < npe_b; ++b) {
        for (int a = 0; a < npe_a; ++a) {
          const double pa = trial_qb.values[q][a];
          const double pb = test_qb.values[q][b];
          switch (id) {
            case FormId::AEl:
            case FormId::AF: {
              const double mu = id == FormId::AEl ? params.mu_el : params.mu_f;
              const double gagb = ga[a].dot(gb[b]);
              for (int ca = 0; ca < 2; ++ca)
                for (int cb = 0; cb < 2; ++cb) {
                  // σ(φa e_ca):ε(φb e_cb) = μ[δ g·g + g_cb g_ca] + λ div·div
                  double v = mu * ga[a][cb] * gb[b][ca];
                  if (ca == cb) v += mu * gagb;
                  if (id == FormId::AEl) v += params.lambda * ga[a][ca] * gb[b][cb];
                  triplets.emplace_back(test.dof(nb[b], cb), trial.dof(na[a], ca),
                                        w * v);
                }
              break;
            }
            case FormId::MJ: {
              for (int j = 0; j < nj; ++j)
                triplets.emplace_back(test.dof(nb[b], j), trial.dof(na[a], j),
                                      w * params.c[j] * pa * pb);
              break;
            }
            case FormId::ATildeJ: {
              const double mass = pa * pb;
              const double stiff = ga[a].dot(gb[b]);
              for (int j = 0; j < nj; ++j) {
                double diag = params.kappa[j] / params.mu[j] * stiff +
                              params.beta_e[j] * mass;
                for (int k = 0; k < nj; ++k)
                  if (k != j) diag += params.beta(k, j) * mass;
                triplets.emplace_back(test.dof(nb[b], j), trial.dof(na[a], j),
                                      w * diag);
                for (int m = 0; m < nj; ++m)
                  if (m != j)
                    triplets.emplace_back(test.dof(nb[b], j), trial.dof(na[a], m),
                                          -w * params.beta(m, j) * mass);
              }
              break;
            }
            case FormId::BJ: {
              for (int j = 0; j < nj; ++j)
                for (int cb = 0; cb < 2; ++cb)
                  triplets.emplace_back(test.dof(nb[b], cb), trial.dof(na[a], j),
                                        -w * params.alpha[j] * pa * gb[b][cb]);
              break;
            }
            case FormId::BF: {
              for (int cb = 0; cb < 2; ++cb)
                triplets.emplace_back(test.dof(nb[b], cb), trial.dof(na[a], 0),
                                      -w * pa * gb[b][cb]);
              break;
            }
          }
        }
      }
    }
  }

  SparseMat mat(test.num_dofs(), trial.num_dofs());
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

SparseMat assemble_interface_coupling(InterfaceSide side, const DofMap& pressure,
                                      const DofMap& vector_field,
                                      const FacetSet& facets, int quad_order) {
  require(pressure.subdomain() == Subdomain::Elastic,
          "assemble_interface_coupling: p_E trace lives on the elastic subdomain");
  require(vector_field.subdomain() == (side == InterfaceSide::Elastic
                                           ? Subdomain::Elastic
                                           : Subdomain::Fluid),
          "assemble_interface_coupling: vector map on the wrong subdomain");
  require(vector_field.components() == 2,
          "assemble_interface_coupling: vector map needs 2 components");
  require(!facets.interface.empty(),
          "assemble_interface_coupling: empty interface set");

  const Mesh& mesh = pressure.mesh();
  const int comp_e = pressure.components() - 1;
  std::vector<double> sp, sw;
  gauss_legendre((quad_order + 2) / 2, sp, sw);

  std::vector<double> pv(pressure.nodes_per_element());
  std::vector<Vec2> pg(pressure.nodes_per_element());
  std::vector<double> vv(vector_field.nodes_per_element());
  std::vector<Vec2> vg(vector_field.nodes_per_element());

  std::vector<Eigen::Triplet<double>> triplets;
  for (int e : facets.interface) {
    const Edge& edge = mesh.edges()[e];
    const int t_el = edge.owner[0];  // elastic by construction
    const int t_v = side == InterfaceSide::Elastic ? edge.owner[0] : edge.owner[1];
    const Vec2 n = mesh.outward_normal(e, t_v);
    const Vec2 a = mesh.vertices()[edge.v[0]];
    const Vec2 b = mesh.vertices()[edge.v[1]];
    const double len = (b - a).norm();
    const int* pn = pressure.element_nodes(pressure.local_element(t_el));
    const int* vn = vector_field.element_nodes(vector_field.local_element(t_v));

    for (std::size_t q = 0; q < sp.size(); ++q) {
      const Vec2 x = a + sp[q] * (b - a);
      const double w = sw[q] * len;
      lagrange_basis_at(pressure.degree(), mesh.to_reference(t_el, x), pv.data(),
                        pg.data());
      lagrange_basis_at(vector_field.degree(), mesh.to_reference(t_v, x), vv.data(),
                        vg.data());
      for (int iv = 0; iv < vector_field.nodes_per_element(); ++iv)
        for (int ip = 0; ip < pressure.nodes_per_element(); ++ip)
          for (int cv = 0; cv < 2; ++cv)
            triplets.emplace_back(vector_field.dof(vn[iv], cv),
                                  pressure.dof(pn[ip], comp_e),
                                  w * pv[ip] * vv[iv] * n[cv]);
    }
  }

  SparseMat mat(vector_field.num_dofs(), pressure.num_dofs());
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

Eigen::VectorXd assemble_load(const DofMap& map, const FieldFn& f, double t,
                              int quad_order) {
  const Mesh& mesh = map.mesh();
  const QuadBasis qb = tabulate(map.degree(), quad_order);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(map.num_dofs());
  std::vector<double> fval(map.components());

  for (std::size_t e = 0; e < map.elements().size(); ++e) {
    const int tri = map.elements()[e];
    const double detj = 2.0 * mesh.area(tri);
    const int* nodes = map.element_nodes(static_cast<int>(e));
    for (std::size_t q = 0; q < qb.rule.points.size(); ++q) {
      const double w = qb.rule.weights[q] * detj;
      f(t, mesh.to_physical(tri, qb.rule.points[q]), fval);
      for (int i = 0; i < map.nodes_per_element(); ++i)
        for (int c = 0; c < map.components(); ++c)
          rhs[map.dof(nodes[i], c)] += w * fval[c] * qb.values[q][i];
    }
  }
  return rhs;
}

}  // namespace mpe
