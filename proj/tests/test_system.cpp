#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpe/manufactured.hpp"
#include "mpe/solver.hpp"
#include "mpe/system.hpp"

using namespace mpe;

namespace {

SourceFields zero_sources() {
  return {zero_field(), zero_field(), zero_field()};
}

BoundaryFields zero_boundary() {
  return {zero_field(), zero_field(), zero_field()};
}

}  // namespace

TEST_CASE("block layout covers all four fields") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const BlockLayout& L = disc.layout;
  CHECK(L.total() == disc.d_map->num_dofs() + disc.pj_map->num_dofs() +
                         disc.u_map->num_dofs() + disc.p_map->num_dofs());

  const Eigen::VectorXd prev = Eigen::VectorXd::Zero(L.total());
  const AssembledSystem sys =
      assemble_step_system(disc, prev, 1e-7, 1e-7, zero_sources());
  CHECK(sys.matrix.rows() == L.total());
  CHECK(sys.matrix.cols() == L.total());
  CHECK(sys.rhs.size() == L.total());
}

TEST_CASE("homogeneous data gives the zero solution") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const Eigen::VectorXd prev = Eigen::VectorXd::Zero(disc.layout.total());
  AssembledSystem sys = assemble_step_system(disc, prev, 1e-7, 1e-7, zero_sources());
  apply_dirichlet(sys, zero_boundary(), 1e-7, disc);
  const Eigen::VectorXd x = sparse_solve(sys.matrix, sys.rhs);
  CHECK(x.cwiseAbs().maxCoeff() == 0.0);
  for (int i : sys.dirichlet_dofs) CHECK(x[i] == 0.0);
}

TEST_CASE("the step matrix is not symmetric") {
  const Mesh mesh = build_two_square_mesh(1);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const Eigen::VectorXd prev = Eigen::VectorXd::Zero(disc.layout.total());
  const AssembledSystem sys =
      assemble_step_system(disc, prev, 1e-7, 1e-7, zero_sources());
  const SparseMat diff = SparseMat(sys.matrix.transpose()) - sys.matrix;
  double asym = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMat::InnerIterator it(diff, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  CHECK(asym > 1e-6);
}

TEST_CASE("row (i) and row (ii) carry transposed coupling blocks") {
  const Mesh mesh = build_two_square_mesh(1);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const BlockLayout& L = disc.layout;
  const double dt = 1e-7;
  const Eigen::VectorXd prev = Eigen::VectorXd::Zero(L.total());
  const AssembledSystem sys = assemble_step_system(disc, prev, dt, dt, zero_sources());
  const Eigen::MatrixXd a(sys.matrix);
  const Eigen::MatrixXd top = a.block(L.offset_d(), L.offset_pj(), L.n_d, L.n_pj);
  const Eigen::MatrixXd left = a.block(L.offset_pj(), L.offset_d(), L.n_pj, L.n_d);
  CHECK((top + dt * left.transpose()).cwiseAbs().maxCoeff() < 1e-9 * (1.0 / dt));

  // the Stokes coupling enters rows (ii) and (iii) with opposite signs
  const Eigen::MatrixXd jf_rows = a.block(L.offset_u(), L.offset_pj(), L.n_u, L.n_pj);
  const Eigen::MatrixXd jf_cols = a.block(L.offset_pj(), L.offset_u(), L.n_pj, L.n_u);
  CHECK((jf_rows + jf_cols.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(jf_rows.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("dirichlet rows become identity rows with boundary values") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ManufacturedSolution exact(params);

  const Eigen::VectorXd prev = Eigen::VectorXd::Zero(disc.layout.total());
  AssembledSystem sys = assemble_step_system(disc, prev, 1e-7, 1e-7,
                                             exact.source_fields());
  apply_dirichlet(sys, exact.boundary_fields(), 1e-7, disc);

  const Eigen::VectorXd x = sparse_solve(sys.matrix, sys.rhs);
  for (std::size_t k = 0; k < sys.dirichlet_dofs.size(); ++k)
    CHECK(x[sys.dirichlet_dofs[k]] ==
          doctest::Approx(sys.dirichlet_values[k]).epsilon(1e-12));

  // unconstrained columns of constrained dofs were eliminated
  for (int col : sys.dirichlet_dofs)
    for (SparseMat::InnerIterator it(sys.matrix, col); it; ++it)
      if (it.row() != it.col()) CHECK(it.value() == 0.0);
}

TEST_CASE("invalid step inputs are rejected") {
  const Mesh mesh = build_two_square_mesh(1);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const Eigen::VectorXd bad = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(assemble_step_system(disc, bad, 1e-7, 1e-7, zero_sources()),
                  std::invalid_argument);
  const Eigen::VectorXd prev = Eigen::VectorXd::Zero(disc.layout.total());
  CHECK_THROWS_AS(assemble_step_system(disc, prev, 0.0, 1e-7, zero_sources()),
                  std::invalid_argument);
}

TEST_CASE("only s = 1 is supported") {
  const Mesh mesh = build_two_square_mesh(1);
  CHECK_THROWS_AS(Discretization::build(mesh, ParameterSet::unit(1, 0.5), 2),
                  std::invalid_argument);
}
