#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpe/dofmap.hpp"
#include "mpe/forms.hpp"
#include "mpe/lagrange.hpp"
#include "mpe/quadrature.hpp"

using namespace mpe;

namespace {

// ∫_ref x^a y^b = a! b! / (a+b+2)!
double monomial_integral(int a, int b) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

}  // namespace

TEST_CASE("triangle quadrature integrates monomials exactly") {
  for (int order = 1; order <= 10; ++order) {
    const QuadratureRule rule = quadrature_rule(order);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));

    for (int a = 0; a + 0 <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        double integral = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
          integral += rule.weights[q] * std::pow(rule.points[q].x(), a) *
                      std::pow(rule.points[q].y(), b);
        CHECK(integral ==
              doctest::Approx(monomial_integral(a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("quadrature spot values") {
  const QuadratureRule rule = quadrature_rule(4);
  double one = 0.0, xy = 0.0, xx = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    one += rule.weights[q];
    xy += rule.weights[q] * rule.points[q].x() * rule.points[q].y();
    xx += rule.weights[q] * rule.points[q].x() * rule.points[q].x();
  }
  CHECK(one == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(xy == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  CHECK(xx == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("quadrature order limits") {
  CHECK_THROWS_AS(quadrature_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_rule(11), std::invalid_argument);
}

TEST_CASE("gauss-legendre on [0,1]") {
  std::vector<double> s, w;
  for (int n = 1; n <= 6; ++n) {
    gauss_legendre(n, s, w);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double integral = 0.0;
      for (int q = 0; q < n; ++q) integral += w[q] * std::pow(s[q], k);
      CHECK(integral == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("lagrange bases: Kronecker and partition of unity") {
  for (int degree : {1, 2}) {
    const int n = basis_size(degree);
    std::vector<Vec2> nodes;
    if (degree == 1)
      for (const Vec2& p : reference_nodes_p1()) nodes.push_back(p);
    else
      for (const Vec2& p : reference_nodes_p2()) nodes.push_back(p);

    for (int i = 0; i < n; ++i) {
      const BasisEval e = lagrange_basis(degree, nodes[i]);
      for (int j = 0; j < n; ++j)
        CHECK(e.values[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      double x = dist(rng), y = dist(rng);
      if (x + y > 1.0) {
        x = 1.0 - x;
        y = 1.0 - y;
      }
      const BasisEval e = lagrange_basis(degree, {x, y});
      double sum = 0.0;
      Vec2 gsum = Vec2::Zero();
      for (int j = 0; j < n; ++j) {
        sum += e.values[j];
        gsum += e.gradients[j];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(gsum.norm() < 1e-13);
    }
  }
}

TEST_CASE("P2 vertex function at the barycenter") {
  const BasisEval e = lagrange_basis(2, {1.0 / 3.0, 1.0 / 3.0});
  CHECK(e.values[0] == doctest::Approx(-1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("basis gradients match finite differences") {
  const Vec2 p(0.31, 0.24);
  const double h = 1e-6;
  for (int degree : {1, 2}) {
    const BasisEval e = lagrange_basis(degree, p);
    const BasisEval ex1 = lagrange_basis(degree, p + Vec2(h, 0));
    const BasisEval ex0 = lagrange_basis(degree, p - Vec2(h, 0));
    const BasisEval ey1 = lagrange_basis(degree, p + Vec2(0, h));
    const BasisEval ey0 = lagrange_basis(degree, p - Vec2(0, h));
    for (int j = 0; j < basis_size(degree); ++j) {
      CHECK(e.gradients[j].x() ==
            doctest::Approx((ex1.values[j] - ex0.values[j]) / (2 * h)).epsilon(1e-6));
      CHECK(e.gradients[j].y() ==
            doctest::Approx((ey1.values[j] - ey0.values[j]) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("point outside the reference triangle rejected") {
  CHECK_THROWS_AS(lagrange_basis(2, {0.7, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(lagrange_basis(1, {-0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("dof counts on the n=1 elastic submesh") {
  const Mesh m = build_two_square_mesh(1);
  CHECK(build_dof_map(m, Subdomain::Elastic, 2, 1).num_dofs() == 9);
  CHECK(build_dof_map(m, Subdomain::Elastic, 1, 1).num_dofs() == 4);
  CHECK(build_dof_map(m, Subdomain::Elastic, 2, 2).num_dofs() == 18);
  CHECK_THROWS_AS(build_dof_map(m, Subdomain::Elastic, 3, 1), std::invalid_argument);
}

TEST_CASE("dirichlet nodes exclude the interface") {
  const Mesh m = build_two_square_mesh(1);
  const DofMap map = build_dof_map(m, Subdomain::Elastic, 2, 1);
  int dirichlet = 0;
  for (int n = 0; n < map.num_nodes(); ++n) {
    const Vec2& x = map.node_coord(n);
    const bool on_outer = std::abs(x.x() + 0.5) < 1e-12 || std::abs(x.y()) < 1e-12 ||
                          std::abs(x.y() - 0.5) < 1e-12;
    CHECK(map.node_on_dirichlet(n) == on_outer);
    if (on_outer) ++dirichlet;
  }
  CHECK(dirichlet == 7);  // 4 corners + 3 outer edge midpoints
  CHECK(map.dirichlet_dofs().size() == 7);
}

TEST_CASE("shared dofs agree between adjacent elements") {
  const Mesh m = build_two_square_mesh(2);
  const DofMap map = build_dof_map(m, Subdomain::Elastic, 2, 1);
  const FieldFn f = [](double, const Vec2& x, std::span<double> out) {
    out[0] = 1.0 + 2.0 * x.x() - 0.7 * x.y() + x.x() * x.y();
  };
  const Eigen::VectorXd c = interpolate_nodal(f, map, 0.0);
  for (const auto& edge : m.edges()) {
    if (edge.kind != EdgeKind::InteriorElastic) continue;
    const Vec2 mid = 0.5 * (m.vertices()[edge.v[0]] + m.vertices()[edge.v[1]]);
    const auto v0 = eval_discrete(c, map, edge.owner[0], mid);
    const auto v1 = eval_discrete(c, map, edge.owner[1], mid);
    CHECK(v0.value[0] == doctest::Approx(v1.value[0]).epsilon(1e-13));
  }
}

TEST_CASE("nodal interpolation basics") {
  const Mesh m = build_two_square_mesh(2);
  const DofMap p2 = build_dof_map(m, Subdomain::Fluid, 2, 1);
  const DofMap p1 = build_dof_map(m, Subdomain::Fluid, 1, 1);

  const FieldFn constant = [](double, const Vec2&, std::span<double> out) {
    out[0] = 4.25;
  };
  const Eigen::VectorXd cc = interpolate_nodal(constant, p2, 0.0);
  CHECK(cc.minCoeff() == doctest::Approx(4.25));
  CHECK(cc.maxCoeff() == doctest::Approx(4.25));

  // x² + y is reproduced exactly by P2
  const FieldFn quad = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x() * x.x() + x.y();
  };
  const Eigen::VectorXd cq = interpolate_nodal(quad, p2, 0.0);
  const int tri_q = p2.elements()[2];
  const Vec2 xq = m.to_physical(tri_q, {0.21, 0.33});
  const auto eq = eval_discrete(cq, p2, tri_q, xq);
  CHECK(eq.value[0] == doctest::Approx(xq.x() * xq.x() + xq.y()).epsilon(1e-13));

  // xy on P1: nodal values match, the element midpoint does not
  const FieldFn bilinear = [](double, const Vec2& x, std::span<double> out) {
    out[0] = x.x() * x.y();
  };
  const Eigen::VectorXd cb = interpolate_nodal(bilinear, p1, 0.0);
  for (int n = 0; n < p1.num_nodes(); ++n)
    CHECK(cb[n] == doctest::Approx(p1.node_coord(n).x() * p1.node_coord(n).y()));
  const int tri = p1.elements()[0];
  const Vec2 center = (m.vertices()[m.triangles()[tri].v[0]] +
                       m.vertices()[m.triangles()[tri].v[1]] +
                       m.vertices()[m.triangles()[tri].v[2]]) / 3.0;
  const auto eb = eval_discrete(cb, p1, tri, center);
  CHECK(std::abs(eb.value[0] - center.x() * center.y()) > 1e-5);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p2.num_dofs());
  const auto ez = eval_discrete(zero, p2, p2.elements()[0],
                                m.vertices()[m.triangles()[p2.elements()[0]].v[0]]);
  CHECK(ez.value[0] == 0.0);
  CHECK(ez.grad.norm() == 0.0);

  // a point well inside a different element is rejected
  const int tri0 = p2.elements()[0];
  CHECK_THROWS_AS(eval_discrete(zero, p2, tri0, Vec2(0.49, 0.49)),
                  std::invalid_argument);
}

TEST_CASE("polynomial reproduction at random points") {
  const Mesh m = build_two_square_mesh(2);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.05, 0.95);

  for (int degree : {1, 2}) {
    const DofMap map = build_dof_map(m, Subdomain::Elastic, degree, 1);
    // random polynomial of total degree ≤ degree
    std::vector<double> a(6);
    for (auto& v : a) v = coef(rng);
    const auto poly = [&](const Vec2& x) {
      double v = a[0] + a[1] * x.x() + a[2] * x.y();
      if (degree == 2)
        v += a[3] * x.x() * x.x() + a[4] * x.x() * x.y() + a[5] * x.y() * x.y();
      return v;
    };
    const FieldFn f = [&](double, const Vec2& x, std::span<double> out) {
      out[0] = poly(x);
    };
    const Eigen::VectorXd c = interpolate_nodal(f, map, 0.0);

    for (int k = 0; k < 20; ++k) {
      const int e = static_cast<int>(rng() % map.elements().size());
      const int tri = map.elements()[e];
      double r = unit(rng), s = unit(rng);
      if (r + s > 1.0) {
        r = 1.0 - r;
        s = 1.0 - s;
      }
      const Vec2 x = m.to_physical(tri, {r, s});
      const auto ev = eval_discrete(c, map, tri, x);
      CHECK(ev.value[0] == doctest::Approx(poly(x)).epsilon(1e-12));

      const double h = 1e-6;
      const double fdx = (poly(x + Vec2(h, 0)) - poly(x - Vec2(h, 0))) / (2 * h);
      const double fdy = (poly(x + Vec2(0, h)) - poly(x - Vec2(0, h))) / (2 * h);
      if (std::abs(fdx) > 1e-8)
        CHECK(ev.grad(0, 0) == doctest::Approx(fdx).epsilon(1e-6));
      if (std::abs(fdy) > 1e-8)
        CHECK(ev.grad(0, 1) == doctest::Approx(fdy).epsilon(1e-6));
    }
  }
}

TEST_CASE("mass-matrix row sums equal the load of a constant") {
  const Mesh m = build_two_square_mesh(2);
  const DofMap map = build_dof_map(m, Subdomain::Elastic, 2, 1);
  ParameterSet params = ParameterSet::unit(1, 0.5);
  const SparseMat mj = assemble_form(FormId::MJ, map, map, params);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(map.num_dofs());
  const Eigen::VectorXd rowsum = mj * ones;
  const Eigen::VectorXd load = assemble_load(
      map, [](double, const Vec2&, std::span<double> out) { out[0] = 1.0; }, 0.0);
  CHECK((rowsum - load).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(ones.dot(mj * ones) == doctest::Approx(0.25).epsilon(1e-13));
}
