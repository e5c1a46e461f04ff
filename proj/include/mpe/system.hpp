#pragma once

#include <memory>

#include "mpe/forms.hpp"

namespace mpe {

/// Global unknown ordering: displacement, network pressures, velocity,
/// Stokes pressure, each in one contiguous block.
struct BlockLayout {
  int n_d = 0, n_pj = 0, n_u = 0, n_p = 0;

  int offset_d() const { return 0; }
  int offset_pj() const { return n_d; }
  int offset_u() const { return n_d + n_pj; }
  int offset_p() const { return n_d + n_pj + n_u; }
  int total() const { return n_d + n_pj + n_u + n_p; }
};

/// Mesh, facet partition, dof maps and the time-independent form matrices of
/// the discretization (degree s+1 for d, p_J, u and degree s for p).
struct Discretization {
  const Mesh* mesh = nullptr;
  FacetSet facets;
  ParameterSet params;
  int s = 1;
  int quad_order = kDefaultQuadOrder;

  std::unique_ptr<DofMap> d_map, pj_map, u_map, p_map;
  BlockLayout layout;

  SparseMat a_el, m_j, a_tilde_j, a_f;  // symmetric blocks
  SparseMat b_j, b_f;                   // rows: vector test, cols: pressure trial
  SparseMat j_el, j_f;                  // interface couplings, same orientation

  static Discretization build(const Mesh& mesh, const ParameterSet& params, int s = 1,
                              int quad_order = kDefaultQuadOrder);
};

/// One implicit-Euler step as a monolithic linear system. Kept alongside the
/// constrained operator are the unconstrained matrix/rhs (for the
/// Galerkin-orthogonality diagnostic) and the constraint data.
struct AssembledSystem {
  SparseMat matrix;
  Eigen::VectorXd rhs;
  BlockLayout layout;
  std::vector<int> dirichlet_dofs;   // global indices, ascending
  Eigen::VectorXd dirichlet_values;  // parallel to dirichlet_dofs (set by apply_dirichlet)
  SparseMat matrix_unconstrained;
  Eigen::VectorXd rhs_unconstrained;
  bool constrained = false;
};

/// Assemble the step system for the unknown (dⁿ, p_Jⁿ, uⁿ, pⁿ) given the
/// previous state and sources sampled at t_n. No constraints applied yet.
AssembledSystem assemble_step_system(const Discretization& disc,
                                     const Eigen::VectorXd& prev, double dt, double t_n,
                                     const SourceFields& sources);

/// Row replacement with column elimination: constrained rows become identity
/// rows carrying the nodal boundary value; known values move to the rhs.
void apply_dirichlet(AssembledSystem& system, const BoundaryFields& bc, double t_n,
                     const Discretization& disc);

/// Global Dirichlet dof indices of the coupled system (d, p_J, u blocks).
std::vector<int> global_dirichlet_dofs(const Discretization& disc);

/// Nodal boundary values at the constrained dofs, ordered like
/// global_dirichlet_dofs().
Eigen::VectorXd dirichlet_values(const Discretization& disc, const BoundaryFields& bc,
                                 double t);

}  // namespace mpe
