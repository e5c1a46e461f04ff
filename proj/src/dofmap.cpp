#include "mpe/dofmap.hpp"

#include <algorithm>
#include <stdexcept>

#include "mpe/lagrange.hpp"

namespace mpe {

namespace {

constexpr double kNodeTol = 1e-12;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp(ab.dot(p - a) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

}  // namespace

DofMap::DofMap(const Mesh& mesh, Subdomain subdomain, int degree, int components)
    : mesh_(&mesh), subdomain_(subdomain), degree_(degree), components_(components) {
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("DofMap: degree must be 1 or 2");
  if (components < 1) throw std::invalid_argument("DofMap: components must be >= 1");

  local_of_triangle_.assign(mesh.num_triangles(), -1);
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (mesh.triangles()[t].tag == subdomain) {
      local_of_triangle_[t] = static_cast<int>(elements_.size());
      elements_.push_back(t);
    }
  if (elements_.empty()) throw std::invalid_argument("DofMap: empty subdomain");

  // Global scalar nodes: subdomain vertices, then (degree 2) edge midpoints.
  std::vector<int> vertex_node(mesh.num_vertices(), -1);
  std::vector<int> edge_node;
  if (degree_ == 2) edge_node.assign(mesh.num_edges(), -1);

  const int npe = nodes_per_element();
  element_nodes_.resize(elements_.size() * static_cast<std::size_t>(npe));
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const int t = elements_[e];
    const auto& tri = mesh.triangles()[t];
    int* nodes = element_nodes_.data() + e * npe;
    for (int k = 0; k < 3; ++k) {
      int& vn = vertex_node[tri.v[k]];
      if (vn == -1) {
        vn = static_cast<int>(node_coords_.size());
        node_coords_.push_back(mesh.vertices()[tri.v[k]]);
      }
      nodes[k] = vn;
    }
    if (degree_ == 2) {
      const auto& te = mesh.triangle_edges(t);
      for (int k = 0; k < 3; ++k) {
        int& en = edge_node[te[k]];
        if (en == -1) {
          const auto& edge = mesh.edges()[te[k]];
          en = static_cast<int>(node_coords_.size());
          node_coords_.push_back(
              0.5 * (mesh.vertices()[edge.v[0]] + mesh.vertices()[edge.v[1]]));
        }
        // local midpoint node 3+k sits on the edge joining vertices k, k+1,
        // which is exactly the mesh edge triangle_edges()[k]
        nodes[3 + k] = en;
      }
    }
  }

  // Dirichlet nodes by geometric proximity to the subdomain's outer-boundary
  // facets, so corner nodes are picked up from either adjacent facet.
  const FacetSet facets = classify_facets(mesh);
  const auto& dirichlet_edges =
      subdomain == Subdomain::Elastic ? facets.dirichlet_d : facets.dirichlet_u;
  node_dirichlet_.assign(node_coords_.size(), 0);
  for (int n = 0; n < num_nodes(); ++n) {
    for (int e : dirichlet_edges) {
      const auto& edge = mesh.edges()[e];
      if (point_segment_distance(node_coords_[n], mesh.vertices()[edge.v[0]],
                                 mesh.vertices()[edge.v[1]]) <= kNodeTol) {
        node_dirichlet_[n] = 1;
        break;
      }
    }
  }
  for (int n = 0; n < num_nodes(); ++n)
    if (node_dirichlet_[n])
      for (int c = 0; c < components_; ++c) dirichlet_dofs_.push_back(dof(n, c));
}

DofMap build_dof_map(const Mesh& mesh, Subdomain subdomain, int degree, int components) {
  return DofMap(mesh, subdomain, degree, components);
}

Eigen::VectorXd interpolate_nodal(const FieldFn& field, const DofMap& map, double t) {
  Eigen::VectorXd coeffs(map.num_dofs());
  std::vector<double> vals(map.components());
  for (int n = 0; n < map.num_nodes(); ++n) {
    field(t, map.node_coord(n), vals);
    for (int c = 0; c < map.components(); ++c) coeffs[map.dof(n, c)] = vals[c];
  }
  return coeffs;
}

DiscreteEval eval_discrete(const Eigen::VectorXd& coeffs, const DofMap& map, int t,
                           const Vec2& x) {
  const int e = map.local_element(t);
  if (e < 0) throw std::invalid_argument("eval_discrete: element outside subdomain");
  const Vec2 xhat = map.mesh().to_reference(t, x);
  const BasisEval basis = lagrange_basis(map.degree(), xhat);  // checks containment
  const Mat2 jinv_t = map.mesh().jacobian(t).inverse().transpose();

  DiscreteEval out;
  out.value = Eigen::VectorXd::Zero(map.components());
  out.grad = Eigen::Matrix<double, -1, 2>::Zero(map.components(), 2);
  const int* nodes = map.element_nodes(e);
  for (int i = 0; i < map.nodes_per_element(); ++i) {
    const Vec2 g = jinv_t * basis.gradients[i];
    for (int c = 0; c < map.components(); ++c) {
      const double coef = coeffs[map.dof(nodes[i], c)];
      out.value[c] += coef * basis.values[i];
      out.grad.row(c) += coef * g.transpose();
    }
  }
  return out;
}

}  // namespace mpe
