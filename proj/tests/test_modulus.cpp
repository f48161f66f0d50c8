#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qc/modulus.hpp"

using namespace qc;

namespace {
Box2 box(double ax, double ay, double bx, double by) {
  Box2 b;
  b.lo = {ax, ay};
  b.hi = {bx, by};
  return b;
}

ModulusResult rect_modulus(double w, double h, int nx, int ny,
                           double tol = 1e-3) {
  GridDomain grid(box(0, 0, w, h), nx, ny);
  auto graph = build_grid_graph(grid);
  PathFamily fam{select_boundary(grid, "left-edge"),
                 select_boundary(grid, "right-edge")};
  return discrete_modulus(graph, fam, 2, tol);
}
}  // namespace

TEST_CASE("rectangle modulus equals height over width") {
  auto r = rect_modulus(2, 1, 24, 12);
  CHECK(!r.degenerate);
  CHECK(!r.empty_family);
  CHECK(r.modulus == doctest::Approx(0.5).epsilon(0.01));

  auto r2 = rect_modulus(1, 3, 12, 36);
  CHECK(r2.modulus == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("certificate soundness") {
  GridDomain grid(box(0, 0, 2, 1), 16, 8);
  auto graph = build_grid_graph(grid);
  PathFamily fam{select_boundary(grid, "left-edge"),
                 select_boundary(grid, "right-edge")};
  auto r = discrete_modulus(graph, fam, 2, 1e-3);
  CHECK(r.certificate >= 1.0 - 1e-3);
  // the reported modulus is the energy of the reported density
  double energy = 0.0;
  for (size_t c = 0; c < r.density.values.size(); ++c) {
    CHECK(r.density.values[c] >= 0.0);
    energy += graph.cell_measure[c] * r.density.values[c] * r.density.values[c];
  }
  CHECK(energy == doctest::Approx(r.modulus).epsilon(1e-9));
}

TEST_CASE("scaling invariance of the 2-modulus") {
  double base = rect_modulus(2, 1, 20, 10).modulus;
  double scaled = rect_modulus(10, 5, 20, 10).modulus;
  CHECK(scaled == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("refinement tightens the rectangle value") {
  double coarse = std::abs(rect_modulus(2, 1, 8, 4).modulus - 0.5);
  double fine = std::abs(rect_modulus(2, 1, 32, 16).modulus - 0.5);
  CHECK(fine <= coarse + 1e-9);
}

TEST_CASE("monotonicity in the endpoint sets") {
  GridDomain grid(box(0, 0, 2, 1), 16, 8);
  auto graph = build_grid_graph(grid);
  auto left = select_boundary(grid, "left-edge");
  auto right = select_boundary(grid, "right-edge");
  // shrinking the source set shrinks the family, hence the modulus
  PathFamily full{left, right};
  PathFamily half{{left.begin(), left.begin() + left.size() / 2}, right};
  double m_full = discrete_modulus(graph, full, 2, 1e-3).modulus;
  double m_half = discrete_modulus(graph, half, 2, 1e-3).modulus;
  CHECK(m_half <= m_full + 1e-6);
}

TEST_CASE("overlapping endpoint sets give an infinite modulus") {
  GridDomain grid(box(0, 0, 1, 1), 8, 8);
  auto graph = build_grid_graph(grid);
  auto left = select_boundary(grid, "left-edge");
  auto r = discrete_modulus(graph, PathFamily{left, left}, 2, 1e-3);
  CHECK(r.degenerate);
  CHECK(std::isinf(r.modulus));
}

TEST_CASE("disconnected endpoint sets give modulus zero") {
  // mask away a vertical band so left and right components split
  auto band = [](const Eigen::Vector2d& p) {
    return p.x() < 0.4 || p.x() > 0.6;
  };
  GridDomain grid(box(0, 0, 1, 1), 20, 8, band);
  auto graph = build_grid_graph(grid);
  PathFamily fam{select_boundary(grid, "left-edge"),
                 select_boundary(grid, "right-edge")};
  auto r = discrete_modulus(graph, fam, 2, 1e-3);
  CHECK(r.empty_family);
  CHECK(r.modulus == 0.0);
}

TEST_CASE("boundary selectors") {
  GridDomain grid(box(0, 0, 1, 1), 8, 8);
  CHECK(select_boundary(grid, "left-edge").size() == 9);
  CHECK(select_boundary(grid, "top-edge").size() == 9);
  CHECK_THROWS(select_boundary(grid, "diagonal"));
  GridDomain ann(box(-2, -2, 2, 2), 32, 32, annulus_mask(1.0, 2.0));
  CHECK(!select_boundary(ann, "circle r=1").empty());
  CHECK(!select_boundary(ann, "circle r=2").empty());
}

TEST_CASE("annulus modulus approaches 2 pi over log ratio") {
  double R = std::exp(1.0);
  double pad = 0.05;
  GridDomain grid(box(-R - pad, -R - pad, R + pad, R + pad), 64, 64,
                  annulus_mask(1.0, R));
  auto graph = build_grid_graph(grid);
  PathFamily fam{select_boundary(grid, "circle r=1"),
                 select_boundary(grid, std::string("circle r=") +
                                           std::to_string(R))};
  auto r = discrete_modulus(graph, fam, 2, 5e-3);
  CHECK(r.modulus == doctest::Approx(2 * M_PI).epsilon(0.05));
}

TEST_CASE("pushforward keeps node ids") {
  GridDomain grid(box(0, 0, 1, 1), 8, 8);
  auto mesh = triangulate(MapSpec::identity(box(0, 0, 1, 1)), grid);
  auto fam = PathFamily{select_boundary(grid, "left-edge"),
                        select_boundary(grid, "right-edge")};
  auto pf = pushforward_family(fam, mesh);
  CHECK(pf.source == fam.source);
  CHECK(pf.target == fam.target);
}

TEST_CASE("identity pushforward preserves the modulus") {
  GridDomain grid(box(0, 0, 2, 1), 16, 8);
  auto fam = PathFamily{select_boundary(grid, "left-edge"),
                        select_boundary(grid, "right-edge")};
  auto rep = verify_lower_modulus(MapSpec::identity(box(0, 0, 2, 1)),
                                  simple_form(2, {1, 2}), grid, fam);
  CHECK(rep.K_emp == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.pass);
  // the mesh graph is finer (midpoints), so its modulus can only be close
  CHECK(rep.mod_image == doctest::Approx(rep.mod_domain).epsilon(0.10));
}
