#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpe/manufactured.hpp"

using namespace mpe;

namespace {

ManufacturedSolution reference_solution() {
  return ManufacturedSolution(ParameterSet::unit(1, 0.5));
}

}  // namespace

TEST_CASE("frequency parameter") {
  const ManufacturedSolution sol = reference_solution();
  CHECK(sol.eta() == doctest::Approx(2.0).epsilon(1e-15));

  ParameterSet p = ParameterSet::unit(1, 0.75);
  p.mu_el = 3.0;
  p.mu_f = 2.0;
  CHECK(ManufacturedSolution(p).eta() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("spot values of the closed-form fields") {
  const ManufacturedSolution sol = reference_solution();

  // the sin·sin − cos·cos profile equals −1 at x + y = 0
  const Vec2 d = sol.displacement(0.0, {-0.25, 0.25});
  CHECK(d.x() == doctest::Approx(-M_PI / 2.0).epsilon(1e-13));
  CHECK(d.y() == doctest::Approx(M_PI / 2.0).epsilon(1e-13));

  double pe;
  sol.pressures(0.0, {0.0, 0.5}, std::span<double>(&pe, 1));
  CHECK(pe == doctest::Approx(-2.0 * M_PI * M_PI).epsilon(1e-13));

  // velocity spots: the profile is −cos(π(x+y))
  const Vec2 u_mirror = sol.velocity(0.0, {-0.25, 0.25});
  CHECK(u_mirror.x() == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
  CHECK(u_mirror.y() == doctest::Approx(-2.0 * M_PI).epsilon(1e-13));
  const Vec2 u_diag = sol.velocity(0.0, {0.25, 0.25});
  CHECK(std::abs(u_diag.x()) < 1e-13);
  CHECK(std::abs(u_diag.y()) < 1e-13);
}

TEST_CASE("analytic gradients match finite differences") {
  const ManufacturedSolution sol = reference_solution();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ux(-0.45, 0.45);
  std::uniform_real_distribution<double> uy(0.05, 0.45);
  const double h = 1e-6, t = 2.3e-7;

  for (int k = 0; k < 25; ++k) {
    const Vec2 x(ux(rng), uy(rng));
    const Mat2 gd = sol.displacement_grad(t, x);
    const Mat2 gu = sol.velocity_grad(t, x);
    for (int i = 0; i < 2; ++i) {
      for (int dir = 0; dir < 2; ++dir) {
        Vec2 e = Vec2::Zero();
        e[dir] = h;
        const double fd_d =
            (sol.displacement(t, x + e)[i] - sol.displacement(t, x - e)[i]) / (2 * h);
        const double fd_u =
            (sol.velocity(t, x + e)[i] - sol.velocity(t, x - e)[i]) / (2 * h);
        CHECK(gd(i, dir) == doctest::Approx(fd_d).epsilon(1e-7));
        CHECK(gu(i, dir) == doctest::Approx(fd_u).epsilon(1e-7));
      }
    }

    Vec2 gpe;
    sol.pressure_grads(t, x, std::span<Vec2>(&gpe, 1));
    const Vec2 gp = sol.stokes_pressure_grad(t, x);
    for (int dir = 0; dir < 2; ++dir) {
      Vec2 e = Vec2::Zero();
      e[dir] = h;
      double pp, pm;
      sol.pressures(t, x + e, std::span<double>(&pp, 1));
      sol.pressures(t, x - e, std::span<double>(&pm, 1));
      CHECK(gpe[dir] == doctest::Approx((pp - pm) / (2 * h)).epsilon(1e-7));
      CHECK(gp[dir] == doctest::Approx((sol.stokes_pressure(t, x + e) -
                                        sol.stokes_pressure(t, x - e)) /
                                       (2 * h))
                           .epsilon(1e-7));
    }

    // analytic time derivatives against a time difference
    const double ht = 1e-7;
    const Vec2 fd_dt =
        (sol.displacement(t + ht, x) - sol.displacement(t - ht, x)) / (2 * ht);
    CHECK((sol.displacement_dt(t, x) - fd_dt).norm() < 1e-6);
  }
}

TEST_CASE("the velocity field is divergence-free") {
  const ManufacturedSolution sol = reference_solution();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(0.02, 0.48), uy(0.02, 0.48);
  for (int k = 0; k < 100; ++k) {
    const Vec2 x(ux(rng), uy(rng));
    CHECK(std::abs(sol.velocity_div(0.37e-7, x)) <= 1e-10);
  }
}

TEST_CASE("finite-difference oracle accepts the derived sources") {
  const ManufacturedSolution sol = reference_solution();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> mag(5e-4, 0.5 - 5e-4);
  std::uniform_real_distribution<double> uy(5e-4, 0.5 - 5e-4);
  const double step = 1e-4;
  for (int k = 0; k < 100; ++k) {
    const double sx = (k % 2 == 0) ? -1.0 : 1.0;
    const Vec2 x(sx * mag(rng), uy(rng));
    const SourceCheck check = sol.verify_sources_fd(1.7e-7, x, step);
    CHECK(check.max_relative() <= 1e-5);
    CHECK(std::abs(check.r_div_u) <= 1e-10);
  }
}

TEST_CASE("g_E matches the oracle at the reference point") {
  const ManufacturedSolution sol = reference_solution();
  const SourceCheck check = sol.verify_sources_fd(0.0, {-0.25, 0.25}, 1e-4);
  CHECK(std::abs(check.r_mass_e) <= 1e-5 * check.scale_e);
}

TEST_CASE("a corrupted source is detected") {
  const ManufacturedSolution sol = reference_solution();
  const SourceCheck check = sol.verify_sources_fd(0.0, {0.2, 0.3}, 1e-4);
  // adding 1 to the first component of f_f shifts the residual by −1
  const Vec2 corrupted = check.r_momentum_f - Vec2(1.0, 0.0);
  CHECK(corrupted.norm() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("interface conditions hold along the interface") {
  const ManufacturedSolution sol = reference_solution();
  for (double t : {0.0, 2e-7, 5e-7}) {
    for (double y : {0.05, 0.2, 0.35, 0.49}) {
      const InterfaceResiduals r = sol.interface_residuals(t, y);
      CHECK(std::abs(r.total_stress) <= 1e-9);
      CHECK(std::abs(r.normal_stress) <= 1e-9);
      CHECK(std::abs(r.normal_flux) <= 1e-9);
      CHECK(std::abs(r.tangential_stress) <= 1e-9);
    }
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(ManufacturedSolution(ParameterSet::unit(2, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ManufacturedSolution(ParameterSet::unit(1, 1.0)),
                  std::invalid_argument);
}
