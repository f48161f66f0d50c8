#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "qc/jets.hpp"

using namespace qc;

namespace {
Box2 box(double ax, double ay, double bx, double by) {
  Box2 b;
  b.lo = {ax, ay};
  b.hi = {bx, by};
  return b;
}
}  // namespace

TEST_CASE("operator norm against power iteration") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd A(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) A(i, j) = g(rng);
    Eigen::Matrix2d G = A.transpose() * A;
    Eigen::Vector2d v(1.0, 0.5);
    for (int it = 0; it < 200; ++it) v = (G * v).normalized();
    double ref = std::sqrt(v.dot(G * v));
    CHECK(operator_norm(A) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("cauchy-binet jacobian") {
  Eigen::MatrixXd A(3, 2);
  A << 1, 0, 0, 2, 0, 0;
  CHECK(cb_jacobian(A) == doctest::Approx(2.0));
  Eigen::MatrixXd B(3, 2);
  B << 1, 2, 3, 4, 5, 6;
  // minors: -2, -4, -2 -> sqrt(24)
  CHECK(cb_jacobian(B) == doctest::Approx(std::sqrt(24.0)).epsilon(1e-12));
}

TEST_CASE("finite differences converge at second order") {
  auto map = MapSpec::graph("sin(x1)*exp(x2)", box(-2, -2, 2, 2));
  Eigen::Vector2d x(0.4, -0.3);
  Eigen::MatrixXd exact(3, 2);
  exact << 1, 0, 0, 1,
      std::cos(x.x()) * std::exp(x.y()), std::sin(x.x()) * std::exp(x.y());
  // rows 3 only: identity rows are exact at any h
  double e1 = (fd_jacobian(map, x, 1e-2) - exact).norm();
  double e2 = (fd_jacobian(map, x, 5e-3) - exact).norm();
  CHECK(e2 > 0);
  CHECK(e1 / e2 > 3.5);  // central differences: factor ~4 per halving
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("analytic jacobians match finite differences") {
  std::vector<MapSpec> maps = {
      MapSpec::exp_plane(box(-1, -4, 1, 4)),
      MapSpec::cylinder(box(0, 0, 3, 2)),
      MapSpec::counterexample(box(-3, -7, 3, 3)),
  };
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (const auto& map : maps) {
    REQUIRE(map.has_analytic_jacobian());
    for (int rep = 0; rep < 8; ++rep) {
      Eigen::Vector2d x(
          map.domain.lo.x() + u(rng) * map.domain.width(),
          map.domain.lo.y() + u(rng) * map.domain.height());
      Eigen::MatrixXd J = map.analytic_jacobian(x);
      Eigen::MatrixXd F = fd_jacobian(map, x, 1e-6 * (1 + x.norm()));
      CHECK((J - F).norm() / (1 + J.norm()) < 1e-7);
    }
  }
}

TEST_CASE("differential refuses points too close to the boundary") {
  auto map = MapSpec::graph("x1*x2", box(0, 0, 1, 1));
  CHECK_THROWS(differential(map, Eigen::Vector2d(1e-9, 0.5)));
  CHECK_NOTHROW(differential(map, Eigen::Vector2d(0.5, 0.5)));
}

TEST_CASE("identity map has unit distortion") {
  auto map = MapSpec::identity(box(0, 0, 1, 1));
  auto rep = distortion_scan(map, simple_form(2, {1, 2}),
                             GridDomain(box(0, 0, 1, 1), 16, 16));
  CHECK(rep.degenerate_points.empty());
  CHECK(rep.ess_sup_K == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.empirical_C == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orientation-reversing linear map is degenerate everywhere") {
  Eigen::MatrixXd M(2, 2);
  M << 1, 0, 0, -1;
  auto map = MapSpec::linear(M, box(0, 0, 1, 1));
  CHECK_THROWS_AS(distortion_scan(map, simple_form(2, {1, 2}),
                                  GridDomain(box(0, 0, 1, 1), 8, 8)),
                  std::runtime_error);
}

TEST_CASE("distortion of a conformal scaling is one") {
  Eigen::MatrixXd M(3, 2);
  M << 2, 0, 0, 2, 0, 0;
  auto map = MapSpec::linear(M, box(-1, -1, 1, 1));
  auto rep = distortion_scan(map, simple_form(3, {1, 2}),
                             GridDomain(box(-1, -1, 1, 1), 8, 8));
  CHECK(rep.ess_sup_K == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("area measure converges under refinement") {
  // cylinder over [0,pi] x [0,1] is an isometry: area pi
  auto map = MapSpec::cylinder(box(0, 0, M_PI, 1));
  double coarse = area_measure(map, GridDomain(box(0, 0, M_PI, 1), 16, 16));
  double fine = area_measure(map, GridDomain(box(0, 0, M_PI, 1), 64, 64));
  CHECK(fine == doctest::Approx(M_PI).epsilon(1e-3));
  CHECK(std::abs(fine - M_PI) <= std::abs(coarse - M_PI) + 1e-12);

  // exp-plane over [0,1]^2: integral of e^{2x} is (e^2 - 1)/2
  auto ep = MapSpec::exp_plane(box(0, 0, 1, 1));
  double ref = (std::exp(2.0) - 1.0) / 2.0;
  CHECK(area_measure(ep, GridDomain(box(0, 0, 1, 1), 128, 128)) ==
        doctest::Approx(ref).epsilon(1e-3));
}
