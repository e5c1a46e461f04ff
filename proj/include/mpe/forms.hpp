#pragma once

#include <Eigen/Sparse>

#include "mpe/dofmap.hpp"
#include "mpe/parameters.hpp"

namespace mpe {

using SparseMat = Eigen::SparseMatrix<double>;

/// Bilinear forms of the weak problem. The matrix orientation is
/// M[test dof, trial dof] = form(trial basis, test basis) with the slot order
/// of the definitions: b_J(pressure, displacement), b_f(pressure, velocity).
enum class FormId { AEl, AF, MJ, ATildeJ, BJ, BF };

/// Default quadrature exactness 2(s+1)+2 with s = 1, used for assembly and
/// estimator norms alike.
inline constexpr int kDefaultQuadOrder = 8;

SparseMat assemble_form(FormId id, const DofMap& trial, const DofMap& test,
                        const ParameterSet& params,
                        int quad_order = kDefaultQuadOrder);

enum class InterfaceSide { Elastic, Fluid };

/// 𝔍_⋆(p̃_E, φ) = ∫_Σ p̃_E φ·n_⋆. Rows: vector-field dofs (test), columns:
/// pressure dofs (trial); only the last-network (E) columns are populated.
SparseMat assemble_interface_coupling(InterfaceSide side, const DofMap& pressure,
                                      const DofMap& vector_field,
                                      const FacetSet& facets,
                                      int quad_order = kDefaultQuadOrder);

/// Load vector (f(t_n,·), φ_i) over the map's subdomain.
Eigen::VectorXd assemble_load(const DofMap& map, const FieldFn& f, double t,
                              int quad_order = kDefaultQuadOrder);

}  // namespace mpe
