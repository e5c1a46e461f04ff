#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mpe/fields.hpp"
#include "mpe/mesh.hpp"

namespace mpe {

/// Continuous Lagrange space of degree 1 or 2 on one subdomain, with
/// `components` identical scalar copies. Dof index = node * components + c.
/// Scalar nodes are the subdomain's vertices followed (degree 2) by its edge
/// midpoints; shared nodes coincide across adjacent elements.
class DofMap {
 public:
  DofMap(const Mesh& mesh, Subdomain subdomain, int degree, int components);

  const Mesh& mesh() const { return *mesh_; }
  Subdomain subdomain() const { return subdomain_; }
  int degree() const { return degree_; }
  int components() const { return components_; }

  int num_nodes() const { return static_cast<int>(node_coords_.size()); }
  int num_dofs() const { return num_nodes() * components_; }
  int dof(int node, int comp) const { return node * components_ + comp; }

  const std::vector<int>& elements() const { return elements_; }  // mesh triangle ids
  int nodes_per_element() const { return degree_ == 1 ? 3 : 6; }
  /// Scalar node ids of local element `e` (index into elements()).
  const int* element_nodes(int e) const {
    return element_nodes_.data() + static_cast<std::size_t>(e) * nodes_per_element();
  }
  /// Local element index of mesh triangle t, or -1 if t is outside the subdomain.
  int local_element(int t) const { return local_of_triangle_[t]; }

  const Vec2& node_coord(int node) const { return node_coords_[node]; }
  bool node_on_dirichlet(int node) const { return node_dirichlet_[node] != 0; }
  /// Expanded over components, ascending.
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }

 private:
  const Mesh* mesh_;
  Subdomain subdomain_;
  int degree_;
  int components_;
  std::vector<int> elements_;
  std::vector<int> local_of_triangle_;
  std::vector<int> element_nodes_;
  std::vector<Vec2> node_coords_;
  std::vector<char> node_dirichlet_;
  std::vector<int> dirichlet_dofs_;
};

DofMap build_dof_map(const Mesh& mesh, Subdomain subdomain, int degree, int components);

/// Coefficients of the nodal interpolant: field values at the geometric nodes.
Eigen::VectorXd interpolate_nodal(const FieldFn& field, const DofMap& map, double t);

struct DiscreteEval {
  Eigen::VectorXd value;              // [components]
  Eigen::Matrix<double, -1, 2> grad;  // (i,j) = ∂_j f_i
};

/// Evaluate a coefficient vector at a physical point inside mesh triangle t.
DiscreteEval eval_discrete(const Eigen::VectorXd& coeffs, const DofMap& map, int t,
                           const Vec2& x);

}  // namespace mpe
