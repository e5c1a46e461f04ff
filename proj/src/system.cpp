#include "mpe/system.hpp"

#include <stdexcept>

namespace mpe {

namespace {

// Scatter `block` into `triplets` with row/column offsets and a scale factor.
void add_block(std::vector<Eigen::Triplet<double>>& triplets, const SparseMat& block,
               int row_offset, int col_offset, double scale,
               bool transpose = false) {
  for (int k = 0; k < block.outerSize(); ++k)
    for (SparseMat::InnerIterator it(block, k); it; ++it) {
      const int r = transpose ? it.col() : it.row();
      const int c = transpose ? it.row() : it.col();
      triplets.emplace_back(row_offset + r, col_offset + c, scale * it.value());
    }
}

}  // namespace

Discretization Discretization::build(const Mesh& mesh, const ParameterSet& params,
                                     int s, int quad_order) {
  if (s != 1)
    throw std::invalid_argument("Discretization: only s = 1 (P2/P1) is supported");
  params.validate();

  Discretization disc;
  disc.mesh = &mesh;
  disc.facets = classify_facets(mesh);
  disc.params = params;
  disc.s = s;
  disc.quad_order = quad_order;

  const int nj = params.num_networks();
  disc.d_map = std::make_unique<DofMap>(mesh, Subdomain::Elastic, s + 1, 2);
  disc.pj_map = std::make_unique<DofMap>(mesh, Subdomain::Elastic, s + 1, nj);
  disc.u_map = std::make_unique<DofMap>(mesh, Subdomain::Fluid, s + 1, 2);
  disc.p_map = std::make_unique<DofMap>(mesh, Subdomain::Fluid, s, 1);

  disc.layout.n_d = disc.d_map->num_dofs();
  disc.layout.n_pj = disc.pj_map->num_dofs();
  disc.layout.n_u = disc.u_map->num_dofs();
  disc.layout.n_p = disc.p_map->num_dofs();

  disc.a_el = assemble_form(FormId::AEl, *disc.d_map, *disc.d_map, params, quad_order);
  disc.m_j = assemble_form(FormId::MJ, *disc.pj_map, *disc.pj_map, params, quad_order);
  disc.a_tilde_j =
      assemble_form(FormId::ATildeJ, *disc.pj_map, *disc.pj_map, params, quad_order);
  disc.a_f = assemble_form(FormId::AF, *disc.u_map, *disc.u_map, params, quad_order);
  disc.b_j = assemble_form(FormId::BJ, *disc.pj_map, *disc.d_map, params, quad_order);
  disc.b_f = assemble_form(FormId::BF, *disc.p_map, *disc.u_map, params, quad_order);
  disc.j_el = assemble_interface_coupling(InterfaceSide::Elastic, *disc.pj_map,
                                          *disc.d_map, disc.facets, quad_order);
  disc.j_f = assemble_interface_coupling(InterfaceSide::Fluid, *disc.pj_map,
                                         *disc.u_map, disc.facets, quad_order);
  return disc;
}

AssembledSystem assemble_step_system(const Discretization& disc,
                                     const Eigen::VectorXd& prev, double dt, double t_n,
                                     const SourceFields& sources) {
  if (dt <= 0.0) throw std::invalid_argument("assemble_step_system: dt must be > 0");
  const BlockLayout& L = disc.layout;
  if (prev.size() != L.total())
    throw std::invalid_argument("assemble_step_system: previous state has wrong size");

  const int od = L.offset_d(), opj = L.offset_pj(), ou = L.offset_u(), op = L.offset_p();
  const double idt = 1.0 / dt;

  std::vector<Eigen::Triplet<double>> triplets;
  // row (i): a_el dⁿ + b_J p_Jⁿ + 𝔍_el p_Eⁿ = F_elⁿ
  add_block(triplets, disc.a_el, od, od, 1.0);
  add_block(triplets, disc.b_j, od, opj, 1.0);
  add_block(triplets, disc.j_el, od, opj, 1.0);
  // row (ii): (1/Δt) m_J p_Jⁿ + ã_J p_Jⁿ − (1/Δt)(b_Jᵀ + 𝔍_elᵀ) dⁿ − 𝔍_fᵀ uⁿ = ...
  add_block(triplets, disc.m_j, opj, opj, idt);
  add_block(triplets, disc.a_tilde_j, opj, opj, 1.0);
  add_block(triplets, disc.b_j, opj, od, -idt, /*transpose=*/true);
  add_block(triplets, disc.j_el, opj, od, -idt, /*transpose=*/true);
  add_block(triplets, disc.j_f, opj, ou, -1.0, /*transpose=*/true);
  // row (iii): a_f uⁿ + b_f pⁿ + 𝔍_f p_Eⁿ = F_fⁿ
  add_block(triplets, disc.a_f, ou, ou, 1.0);
  add_block(triplets, disc.b_f, ou, op, 1.0);
  add_block(triplets, disc.j_f, ou, opj, 1.0);
  // row (iv): b_fᵀ uⁿ = 0
  add_block(triplets, disc.b_f, op, ou, 1.0, /*transpose=*/true);

  AssembledSystem sys;
  sys.layout = L;
  sys.matrix.resize(L.total(), L.total());
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());

  sys.rhs = Eigen::VectorXd::Zero(L.total());
  sys.rhs.segment(od, L.n_d) =
      assemble_load(*disc.d_map, sources.f_el, t_n, disc.quad_order);
  sys.rhs.segment(ou, L.n_u) =
      assemble_load(*disc.u_map, sources.f_f, t_n, disc.quad_order);
  // π⁰ of the linear-in-time source reconstruction is the right-node value
  sys.rhs.segment(opj, L.n_pj) =
      assemble_load(*disc.pj_map, sources.g, t_n, disc.quad_order);

  const Eigen::VectorXd d_prev = prev.segment(od, L.n_d);
  const Eigen::VectorXd pj_prev = prev.segment(opj, L.n_pj);
  sys.rhs.segment(opj, L.n_pj) += idt * (disc.m_j * pj_prev);
  sys.rhs.segment(opj, L.n_pj) -=
      idt * (disc.b_j.transpose() * d_prev + disc.j_el.transpose() * d_prev);

  sys.dirichlet_dofs = global_dirichlet_dofs(disc);
  sys.matrix_unconstrained = sys.matrix;
  sys.rhs_unconstrained = sys.rhs;
  return sys;
}

std::vector<int> global_dirichlet_dofs(const Discretization& disc) {
  const BlockLayout& L = disc.layout;
  std::vector<int> dofs;
  for (int i : disc.d_map->dirichlet_dofs()) dofs.push_back(L.offset_d() + i);
  for (int i : disc.pj_map->dirichlet_dofs()) dofs.push_back(L.offset_pj() + i);
  for (int i : disc.u_map->dirichlet_dofs()) dofs.push_back(L.offset_u() + i);
  return dofs;
}

Eigen::VectorXd dirichlet_values(const Discretization& disc, const BoundaryFields& bc,
                                 double t) {
  std::vector<double> vals;
  const auto append = [&](const DofMap& map, const FieldFn& field) {
    std::vector<double> f(map.components());
    for (int n = 0; n < map.num_nodes(); ++n) {
      if (!map.node_on_dirichlet(n)) continue;
      field(t, map.node_coord(n), f);
      for (int c = 0; c < map.components(); ++c) vals.push_back(f[c]);
    }
  };
  append(*disc.d_map, bc.d);
  append(*disc.pj_map, bc.pj);
  append(*disc.u_map, bc.u);
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void apply_dirichlet(AssembledSystem& sys, const BoundaryFields& bc, double t_n,
                     const Discretization& disc) {
  sys.dirichlet_values = dirichlet_values(disc, bc, t_n);

  std::vector<char> is_constrained(sys.layout.total(), 0);
  Eigen::VectorXd value = Eigen::VectorXd::Zero(sys.layout.total());
  for (std::size_t k = 0; k < sys.dirichlet_dofs.size(); ++k) {
    is_constrained[sys.dirichlet_dofs[k]] = 1;
    value[sys.dirichlet_dofs[k]] = sys.dirichlet_values[static_cast<Eigen::Index>(k)];
  }

  // column elimination on unconstrained rows
  for (int k = 0; k < sys.matrix.outerSize(); ++k)
    for (SparseMat::InnerIterator it(sys.matrix, k); it; ++it)
      if (!is_constrained[it.row()] && is_constrained[it.col()])
        sys.rhs[it.row()] -= it.value() * value[it.col()];

  // row replacement
  for (int k = 0; k < sys.matrix.outerSize(); ++k)
    for (SparseMat::InnerIterator it(sys.matrix, k); it; ++it) {
      if (is_constrained[it.row()])
        it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
      else if (is_constrained[it.col()])
        it.valueRef() = 0.0;
    }
  sys.matrix.prune(0.0);
  for (int i : sys.dirichlet_dofs) sys.rhs[i] = value[i];

  // a constrained diagonal entry may be structurally absent; add it if so
  bool need_diag = false;
  for (int i : sys.dirichlet_dofs)
    if (sys.matrix.coeff(i, i) == 0.0) {
      need_diag = true;
      break;
    }
  if (need_diag) {
    SparseMat diag(sys.layout.total(), sys.layout.total());
    std::vector<Eigen::Triplet<double>> dt;
    for (int i : sys.dirichlet_dofs)
      if (sys.matrix.coeff(i, i) == 0.0) dt.emplace_back(i, i, 1.0);
    diag.setFromTriplets(dt.begin(), dt.end());
    sys.matrix += diag;
  }

  sys.constrained = true;
}

}  // namespace mpe
