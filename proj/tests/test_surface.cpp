#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qc/surface.hpp"

using namespace qc;

namespace {
Box2 box(double ax, double ay, double bx, double by) {
  Box2 b;
  b.lo = {ax, ay};
  b.hi = {bx, by};
  return b;
}
}  // namespace

TEST_CASE("flat mesh geometry") {
  GridDomain grid(box(0, 0, 2, 1), 16, 8);
  auto mesh = triangulate(MapSpec::identity(box(0, 0, 2, 1)), grid);
  CHECK(mesh.vertices.size() == 17 * 9);
  CHECK(mesh.triangles.size() == 16 * 8 * 2);
  CHECK(mesh.total_area() == doctest::Approx(2.0).epsilon(1e-12));

  // axis-aligned distance is exact; diagonal distance within the graph
  // refinement error
  int a = mesh.node_id(0, 0), b = mesh.node_id(16, 0);
  CHECK(intrinsic_distance(mesh, a, b) == doctest::Approx(2.0).epsilon(1e-9));
  int c = mesh.node_id(16, 8);
  CHECK(intrinsic_distance(mesh, a, c) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(0.05));
}

TEST_CASE("cylinder geodesics unroll to the plane") {
  // (cos x1, sin x1, x2) is a flat isometry; geodesic distance equals the
  // unrolled euclidean distance as long as the strip stays within width pi
  GridDomain grid(box(0, 0, 2, 2), 32, 32);
  auto mesh = triangulate(MapSpec::cylinder(box(0, 0, 2, 2)), grid);
  int a = mesh.node_id(0, 0);
  int b = mesh.node_id(32, 32);
  double unrolled = std::hypot(2.0, 2.0);
  double d = intrinsic_distance(mesh, a, b);
  // chords undershoot arcs, graph detours overshoot: both O(h^2) here
  CHECK(d == doctest::Approx(unrolled).epsilon(0.05));
}

TEST_CASE("degenerate triangles are rejected") {
  Eigen::MatrixXd M(3, 2);
  M << 1, 1, 1, 1, 0, 0;  // rank one: collapses cells to segments
  CHECK_THROWS(triangulate(MapSpec::linear(M, box(0, 0, 1, 1)),
                           GridDomain(box(0, 0, 1, 1), 4, 4)));
}

TEST_CASE("ball measure of a flat disk") {
  GridDomain grid(box(-1, -1, 1, 1), 48, 48);
  auto mesh = triangulate(MapSpec::identity(box(-1, -1, 1, 1)), grid);
  Eigen::VectorXd c(2);
  c << 0, 0;
  double r = 0.5;
  CHECK(ball_measure(mesh, c, r) ==
        doctest::Approx(M_PI * r * r).epsilon(0.02));
  // intrinsic balls sit inside euclidean balls of the same radius
  CHECK(ball_measure(mesh, c, r, BallMetric::Intrinsic) <=
        ball_measure(mesh, c, r) + 1e-12);
}

TEST_CASE("flat meshes are llc with small constant") {
  GridDomain grid(box(0, 0, 2, 2), 24, 24);
  auto mesh = triangulate(MapSpec::identity(box(0, 0, 2, 2)), grid);
  Eigen::VectorXd c(2);
  c << 1, 1;
  auto r = llc_constant(mesh, c, 0.6);
  CHECK(!r.unbounded);
  CHECK(r.c <= 1.1);
}

TEST_CASE("projection multiplicity counts preimages") {
  auto id = MapSpec::identity(box(0, 0, 1, 1));
  Eigen::VectorXd y(2);
  y << 0.43, 0.61;
  auto r = projection_multiplicity(id, {1, 2}, y, GridDomain(box(0, 0, 1, 1), 16, 16));
  CHECK(r.count == 1);
  CHECK(!r.unstable);

  // (x1^3 - 3 x1, x2) takes (0, .3) three times: x1 in {0, +-sqrt(3)}
  auto cubic = MapSpec::user({"x1^3 - 3*x1", "x2"}, box(-2, 0, 2, 1));
  Eigen::VectorXd y2(2);
  y2 << 0.0, 0.3;
  auto r3 = projection_multiplicity(cubic, {1, 2}, y2,
                                    GridDomain(box(-2, 0, 2, 1), 64, 16));
  CHECK(r3.count == 3);
}

TEST_CASE("metric differential of smooth embeddings") {
  std::vector<double> radii = {0.02, 0.01};
  auto cyl = MapSpec::cylinder(box(0, 0, 3, 2));
  Eigen::Vector2d x(1.5, 1.0);
  for (double th : {0.0, 0.9, 2.2}) {
    Eigen::Vector2d v(std::cos(th), std::sin(th));
    double md = metric_differential(cyl, x, v, radii);
    double ref = (differential(cyl, x).Df * v).norm();
    CHECK(md == doctest::Approx(ref).epsilon(0.02));
  }
  auto gr = MapSpec::graph("0.3*sin(x1)*cos(x2)", box(-2, -2, 2, 2));
  Eigen::Vector2d xg(0.5, -0.4);
  Eigen::Vector2d vg(0.6, 0.8);
  double md = metric_differential(gr, xg, vg, radii);
  double ref = (differential(gr, xg).Df * vg).norm();
  CHECK(md == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("jacobian of a linear seminorm") {
  // md(v) = |diag(2,3) v| has J = det = 6
  int N = 256;
  std::vector<double> samples(N);
  for (int k = 0; k < N; ++k) {
    double th = 2 * M_PI * (k + 0.5) / N;
    samples[k] = std::hypot(2 * std::cos(th), 3 * std::sin(th));
  }
  CHECK(jacobian_of_seminorm(samples, 2) == doctest::Approx(6.0).epsilon(1e-4));
  // a vanishing direction collapses the jacobian
  samples[7] = 0.0;
  CHECK(jacobian_of_seminorm(samples, 2) == 0.0);
  CHECK_THROWS(jacobian_of_seminorm(std::vector<double>(8, 1.0), 2));
}

TEST_CASE("euclidean unit ball normalization") {
  std::vector<double> ones(64, 1.0);
  CHECK(jacobian_of_seminorm(ones, 2) == doctest::Approx(1.0).epsilon(1e-9));
}
