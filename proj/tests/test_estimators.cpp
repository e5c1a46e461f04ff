#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpe/error_norms.hpp"
#include "mpe/estimators.hpp"
#include "mpe/manufactured.hpp"
#include "mpe/solver.hpp"

using namespace mpe;

namespace {

SourceFields zero_sources() {
  return {zero_field(), zero_field(), zero_field()};
}

StateTrajectory make_traj(const Discretization& disc, const TimeGrid& grid,
                          std::vector<Eigen::VectorXd> states) {
  StateTrajectory traj{grid, disc.layout, std::move(states), 0, {}, {}};
  traj.solver_residuals.assign(grid.num_steps + 1, 0.0);
  traj.galerkin_residuals.assign(grid.num_steps + 1, 0.0);
  return traj;
}

Eigen::VectorXd state_from_fields(const Discretization& disc, const FieldFn& d,
                                  const FieldFn& pj, const FieldFn& u,
                                  const FieldFn& p, double t = 0.0) {
  const BlockLayout& L = disc.layout;
  Eigen::VectorXd s(L.total());
  s.segment(L.offset_d(), L.n_d) = interpolate_nodal(d, *disc.d_map, t);
  s.segment(L.offset_pj(), L.n_pj) = interpolate_nodal(pj, *disc.pj_map, t);
  s.segment(L.offset_u(), L.n_u) = interpolate_nodal(u, *disc.u_map, t);
  s.segment(L.offset_p(), L.n_p) = interpolate_nodal(p, *disc.p_map, t);
  return s;
}

StateTrajectory manufactured_run(const Discretization& disc, const TimeGrid& grid,
                                 const ManufacturedSolution& exact,
                                 bool warm = true) {
  return run_time_loop(disc, grid, exact.source_fields(), exact.initial_fields(),
                       exact.boundary_fields(), TimeLoopOptions{warm});
}

// constants interpolate exactly; a self-comparison must vanish
class ConstantSolution final : public ExactSolution {
 public:
  int num_networks() const override { return 1; }
  Vec2 displacement(double, const Vec2&) const override { return {0.3, -0.2}; }
  Mat2 displacement_grad(double, const Vec2&) const override { return Mat2::Zero(); }
  Vec2 displacement_dt(double, const Vec2&) const override { return Vec2::Zero(); }
  void pressures(double, const Vec2&, std::span<double> out) const override {
    out[0] = 1.7;
  }
  void pressure_grads(double, const Vec2&, std::span<Vec2> out) const override {
    out[0].setZero();
  }
  void pressures_dt(double, const Vec2&, std::span<double> out) const override {
    out[0] = 0.0;
  }
  Vec2 velocity(double, const Vec2&) const override { return {0.1, 0.4}; }
  Mat2 velocity_grad(double, const Vec2&) const override { return Mat2::Zero(); }
  double stokes_pressure(double, const Vec2&) const override { return -0.6; }
  Vec2 stokes_pressure_grad(double, const Vec2&) const override {
    return Vec2::Zero();
  }
};

}  // namespace

TEST_CASE("zero trajectory gives zero estimators") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const TimeGrid grid(2e-7, 1e-7);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(disc.layout.total());
  const StateTrajectory traj = make_traj(disc, grid, {zero, zero, zero});

  const EstimatorReport rep = compute_estimators(disc, traj, zero_sources());
  CHECK(rep.E_d == 0.0);
  CHECK(rep.E_d_dt == 0.0);
  CHECK(rep.E_J == 0.0);
  CHECK(rep.E_up == 0.0);
  CHECK(rep.eta_time == 0.0);
  CHECK(rep.eta_ok == 0.0);
}

TEST_CASE("estimator node range is validated") {
  const Mesh mesh = build_two_square_mesh(1);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const TimeGrid grid(1e-7, 1e-7);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(disc.layout.total());
  const StateTrajectory traj = make_traj(disc, grid, {zero, zero});
  CHECK_THROWS_AS(estimate_E_d(disc, traj, 2, zero_sources()), std::out_of_range);
  CHECK_THROWS_AS(estimate_E_J(disc, traj, 0, zero_sources()), std::out_of_range);
  CHECK_THROWS_AS(estimate_E_d_dt_step(disc, traj, 0, zero_sources()),
                  std::out_of_range);
}

TEST_CASE("globally linear displacement leaves only the interface residual") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const TimeGrid grid(1e-7, 1e-7);
  const FieldFn lin = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x();
    out[1] = 0.0;
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, lin, zero_field(), zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s});

  const EstimatorBreakdown bd = estimate_E_d(disc, traj, 0, zero_sources());
  // σ_P = diag(3,1) is constant: bulk residuals and interior jumps vanish;
  // each interface edge contributes h_K ∫ |σ n_el|² = h_K · 9 · len
  const double h_k = 0.25 * std::sqrt(2.0);
  CHECK(bd.total == doctest::Approx(2 * h_k * 9.0 * 0.25).epsilon(1e-12));
  int nonzero = 0;
  for (double v : bd.per_element)
    if (v > 1e-12) ++nonzero;
  CHECK(nonzero == 2);  // only the elastic owners of the two interface edges
}

TEST_CASE("bulk residual weighting on a hand-computed field") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const TimeGrid grid(1e-7, 1e-7);
  // d = (x², 0) with unit moduli: σ_P = diag(6x, 2x), ∇·σ_P = (6, 0),
  // continuous stress (no jumps) and a vanishing trace on x = 0, so
  // E_d = Σ_K h_K² ‖(6,0)‖² |K| = 36 h² area(Ω_el)
  const FieldFn d = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x() * x.x();
    out[1] = 0.0;
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, d, zero_field(), zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s});
  const double h2 = 0.125;  // (0.25·√2)²
  CHECK(estimate_E_d(disc, traj, 0, zero_sources()).total ==
        doctest::Approx(36.0 * h2 * 0.25).epsilon(1e-12));
}

TEST_CASE("interface residual of E_J sees the fluid-side normal velocity") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const TimeGrid grid(1e-7, 1e-7);
  // u = (1,0), all other fields zero: only u·n_f = −1 survives on Σ,
  // giving E_J = Σ_{F ⊂ Σ} h_K |F| = 2 · (0.25√2) · 0.25
  const FieldFn ex = [](double, const Vec2&, std::span<double> out) {
    out[0] = 1.0;
    out[1] = 0.0;
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, zero_field(), zero_field(), ex, zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s});
  CHECK(estimate_E_J(disc, traj, 1, zero_sources()).total ==
        doctest::Approx(0.125 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("interface residual of E_up sees the pressure trace") {
  const Mesh mesh = build_two_square_mesh(2);
  const Discretization disc = Discretization::build(mesh, ParameterSet::unit(1, 0.5));
  const TimeGrid grid(1e-7, 1e-7);
  // p = 1, everything else zero: R̂_u = p n_f with |R̂_u| = 1 on Σ
  const FieldFn one = [](double, const Vec2&, std::span<double> out) {
    out[0] = 1.0;
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, zero_field(), zero_field(), zero_field(), one);
  const StateTrajectory traj = make_traj(disc, grid, {s, s});
  CHECK(estimate_E_up(disc, traj, 0, zero_sources()).total ==
        doctest::Approx(0.125 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("compatible quadratic data annihilates E_d") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const TimeGrid grid(1e-7, 1e-7);
  // d = (0, x²): ∇·σ_P = (0, 2μ), traces σ n_el vanish on x = 0, C¹ globally
  const FieldFn d = [](double, const Vec2& x, std::span<double> out) {
    out[0] = 0.0;
    out[1] = x.x() * x.x();
  };
  SourceFields src = zero_sources();
  src.f_el = [&](double, const Vec2&, std::span<double> out) {
    out[0] = 0.0;
    out[1] = -2.0 * params.mu_el;
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, d, zero_field(), zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s});
  CHECK(estimate_E_d(disc, traj, 0, src).total <= 1e-20);
}

TEST_CASE("compatible quadratic pressure annihilates E_J") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const TimeGrid grid(1e-7, 1e-7);
  // p_E = x² has zero normal flux at the interface and constant Laplacian
  const FieldFn pe = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x() * x.x();
  };
  SourceFields src = zero_sources();
  src.g = [&](double, const Vec2& x, std::span<double> out) {
    out[0] = params.beta_e[0] * x.x() * x.x() -
             2.0 * params.kappa[0] / params.mu[0];
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, zero_field(), pe, zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s});
  CHECK(estimate_E_J(disc, traj, 1, src).total <= 1e-20);
}

TEST_CASE("spatially constant network pressure with matching source") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const double dt = 1e-7;
  const TimeGrid grid(dt, dt);
  const double c1 = 0.8, c2 = 1.1;
  const auto const_pe = [](double value) {
    return FieldFn([value](double, const Vec2&, std::span<double> out) {
      out[0] = value;
    });
  };
  SourceFields src = zero_sources();
  src.g = [&](double, const Vec2&, std::span<double> out) {
    out[0] = params.c[0] * (c2 - c1) / dt + params.beta_e[0] * c2;
  };
  const Eigen::VectorXd s0 =
      state_from_fields(disc, zero_field(), const_pe(c1), zero_field(), zero_field());
  const Eigen::VectorXd s1 =
      state_from_fields(disc, zero_field(), const_pe(c2), zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s0, s1});
  // roundoff floor: the cancelled c·δp term is of size (c2−c1)/dt ≈ 3e6
  const double scale = (c2 - c1) / dt;
  CHECK(estimate_E_J(disc, traj, 1, src).total <= 1e-28 * scale * scale);
}

TEST_CASE("difference-quotient estimator scales quadratically") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ManufacturedSolution exact(params);
  const TimeGrid grid(2e-7, 1e-7);
  const StateTrajectory traj = manufactured_run(disc, grid, exact);

  StateTrajectory doubled = traj;
  for (auto& s : doubled.states) s *= 2.0;
  const double base = estimate_E_d_dt_step(disc, traj, 1, zero_sources()).total;
  const double twice = estimate_E_d_dt_step(disc, doubled, 1, zero_sources()).total;
  CHECK(twice == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("the bracketed aggregate of the difference-quotient estimator") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ManufacturedSolution exact(params);
  const TimeGrid grid(3e-7, 1e-7);
  const StateTrajectory traj = manufactured_run(disc, grid, exact);
  const SourceFields src = exact.source_fields();

  const EDdtAggregate agg = estimate_E_d_dt(disc, traj, src);
  double sqrt_sum = 0.0;
  for (int n = 1; n <= grid.num_steps; ++n) {
    CHECK(agg.per_step[n] ==
          doctest::Approx(estimate_E_d_dt_step(disc, traj, n, src).total));
    sqrt_sum += grid.dt * std::sqrt(agg.per_step[n]);
  }
  CHECK(agg.total == doctest::Approx(sqrt_sum * sqrt_sum).epsilon(1e-14));
  const EstimatorReport rep = compute_estimators(disc, traj, src);
  CHECK(rep.E_d_dt == doctest::Approx(agg.total).epsilon(1e-13));
}

TEST_CASE("time-constant trajectories have no time estimators") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const TimeGrid grid(3e-7, 1e-7);
  const FieldFn pe = [](double, const Vec2& x, std::span<double> out) {
    out[0] = std::sin(x.x()) * x.y();
  };
  const Eigen::VectorXd s =
      state_from_fields(disc, zero_field(), pe, zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s, s, s});
  SourceFields src = zero_sources();
  src.f_el = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x() * x.y();
    out[1] = -x.y();
  };
  CHECK(estimate_E_d_dt_step(disc, traj, 1, src).total == 0.0);
  CHECK(eta_time(disc, traj) == 0.0);
}

TEST_CASE("eta_time of a single jump is dt/3 times the energy") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const double dt = 1e-7;
  const TimeGrid grid(dt, dt);
  const FieldFn phi = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x() + 0.3 * x.y() * x.y();
  };
  const Eigen::VectorXd s0 = Eigen::VectorXd::Zero(disc.layout.total());
  const Eigen::VectorXd s1 =
      state_from_fields(disc, zero_field(), phi, zero_field(), zero_field());
  const StateTrajectory traj = make_traj(disc, grid, {s0, s1});

  const Eigen::VectorXd v =
      s1.segment(disc.layout.offset_pj(), disc.layout.n_pj);
  const double energy = v.dot(disc.a_tilde_j * v);
  CHECK(eta_time(disc, traj) == doctest::Approx(dt / 3.0 * energy).epsilon(1e-13));
  CHECK(eta_time_quadrature(disc, traj) ==
        doctest::Approx(eta_time(disc, traj)).epsilon(1e-12));
}

TEST_CASE("breakdowns are nonnegative and additive") {
  const Mesh mesh = build_two_square_mesh(4);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ManufacturedSolution exact(params);
  const TimeGrid grid(3e-7, 1e-7);
  const StateTrajectory traj = manufactured_run(disc, grid, exact);
  const SourceFields src = exact.source_fields();

  for (const EstimatorBreakdown& bd :
       {estimate_E_d(disc, traj, 2, src), estimate_E_d_dt_step(disc, traj, 2, src),
        estimate_E_J(disc, traj, 2, src), estimate_E_up(disc, traj, 2, src)}) {
    double sum = 0.0;
    for (double v : bd.per_element) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(bd.total == doctest::Approx(sum).epsilon(1e-13));
    CHECK(bd.total > 0.0);
  }
}

TEST_CASE("jump variants are within the sqrt(2) bound and share rates") {
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const ManufacturedSolution exact(params);
  const TimeGrid grid(5e-7, 1e-7);
  EstimatorOptions traction;
  EstimatorOptions symmetric;
  symmetric.jump = JumpVariant::Symmetric;

  double e_trac[2], e_sym[2];
  int level = 0;
  for (int n : {2, 4}) {
    const Mesh mesh = build_two_square_mesh(n);
    const Discretization disc = Discretization::build(mesh, params);
    const StateTrajectory traj = manufactured_run(disc, grid, exact);
    const SourceFields src = exact.source_fields();
    e_trac[level] = estimate_E_d(disc, traj, 5, src, traction).total;
    e_sym[level] = estimate_E_d(disc, traj, 5, src, symmetric).total;
    CHECK(e_sym[level] <= e_trac[level] * (1.0 + 1e-12));
    CHECK(e_trac[level] <= 2.0 * e_sym[level] * (1.0 + 1e-12));
    ++level;
  }
  const double rate_t = std::log2(e_trac[0] / e_trac[1]);
  const double rate_s = std::log2(e_sym[0] / e_sym[1]);
  CHECK(std::abs(rate_t - rate_s) <= 0.5);
}

TEST_CASE("galerkin orthogonality residual and its sensitivity") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ManufacturedSolution exact(params);
  const Eigen::VectorXd prev =
      state_from_fields(disc, exact.displacement_field(), exact.pressures_field(),
                        exact.velocity_field(), exact.stokes_pressure_field());
  AssembledSystem sys =
      assemble_step_system(disc, prev, 1e-7, 1e-7, exact.source_fields());
  apply_dirichlet(sys, exact.boundary_fields(), 1e-7, disc);
  Eigen::VectorXd x = sparse_solve(sys.matrix, sys.rhs);
  CHECK(galerkin_orthogonality_residual(sys, x) <= 1e-9);

  std::vector<char> constrained(disc.layout.total(), 0);
  for (int i : sys.dirichlet_dofs) constrained[i] = 1;
  int free_dof = 0;
  while (constrained[free_dof]) ++free_dof;
  x[free_dof] += 1e-3;
  CHECK(galerkin_orthogonality_residual(sys, x) > 1e-6);
}

TEST_CASE("galerkin residual of an all-zero system is zero") {
  AssembledSystem sys;
  sys.layout.n_d = 4;
  sys.matrix.resize(4, 4);
  sys.rhs = Eigen::VectorXd::Zero(4);
  sys.matrix_unconstrained = sys.matrix;
  sys.rhs_unconstrained = sys.rhs;
  CHECK(galerkin_orthogonality_residual(sys, Eigen::VectorXd::Zero(4)) == 0.0);
}

TEST_CASE("error norms vanish for a reproducible constant solution") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ConstantSolution exact;
  const TimeGrid grid(2e-7, 1e-7);
  const Eigen::VectorXd s =
      state_from_fields(disc, exact.displacement_field(), exact.pressures_field(),
                        exact.velocity_field(), exact.stokes_pressure_field());
  const StateTrajectory traj = make_traj(disc, grid, {s, s, s});
  const ErrorReport rep = error_norms(disc, traj, exact, 0.0);
  CHECK(rep.err_d_linf <= 1e-24);
  CHECK(rep.err_J_linf <= 1e-24);
  CHECK(rep.err_u_l2 <= 1e-24);
  CHECK(rep.err_J_l2 <= 1e-24);
  CHECK(rep.div_u_l2 <= 1e-24);
}

TEST_CASE("the efficiency index is the plain ratio") {
  const Mesh mesh = build_two_square_mesh(2);
  const ParameterSet params = ParameterSet::unit(1, 0.5);
  const Discretization disc = Discretization::build(mesh, params);
  const ManufacturedSolution exact(params);
  const TimeGrid grid(2e-7, 1e-7);
  const StateTrajectory traj = manufactured_run(disc, grid, exact);
  const ErrorReport base = error_norms(disc, traj, exact, 0.0);
  const ErrorReport rep = error_norms(disc, traj, exact, 2.0 * base.err_e);
  CHECK(rep.i_eff == doctest::Approx(2.0).epsilon(1e-13));
}
