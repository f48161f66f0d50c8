#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qc/verify.hpp"

using namespace qc;

namespace {
Box2 box(double ax, double ay, double bx, double by) {
  Box2 b;
  b.lo = {ax, ay};
  b.hi = {bx, by};
  return b;
}

ExperimentConfig config(MapSpec map, int res) {
  ExperimentConfig cfg;
  cfg.grid = GridDomain(map.domain, res, res);
  cfg.form = simple_form(map.m, {1, 2});
  cfg.map = std::move(map);
  cfg.seed = 11;
  return cfg;
}
}  // namespace

TEST_CASE("analytic definition holds for smooth embeddings") {
  for (auto map : {MapSpec::identity(box(0, 0, 1, 1)),
                   MapSpec::exp_plane(box(-1, -2, 1, 2)),
                   MapSpec::counterexample(box(-2, -4, 2, 2))}) {
    auto cfg = config(map, 48);
    auto r = check_analytic_definition(cfg);
    CHECK(r.pass);
    CHECK(!r.inconclusive);
  }
}

TEST_CASE("metric definition ratio is near one for conformal maps") {
  auto cfg = config(MapSpec::exp_plane(box(-1, -2, 1, 2)), 16);
  auto r = check_metric_definition(cfg, {2e-3, 1e-3, 5e-4});
  CHECK(r.pass);
  CHECK(r.lhs < 1.2);  // exp-plane is conformal: H -> 1
}

TEST_CASE("upper gradient inequality on seeded polylines") {
  for (auto map : {MapSpec::identity(box(0, 0, 2, 1)),
                   MapSpec::cylinder(box(0, 0, 3, 2))}) {
    auto cfg = config(map, 16);
    auto r = check_upper_gradient(cfg, 40);
    CHECK(r.pass);
  }
}

TEST_CASE("measure equality on a flat patch") {
  auto cfg = config(MapSpec::identity(box(0, 0, 1, 1)), 16);
  auto r = check_measure_equality(cfg, cfg.grid, 4, 64);
  CHECK(r.pass);
  CHECK(std::abs(r.lhs - r.rhs) <= 0.03 * std::abs(r.rhs));
}

TEST_CASE("regularity growth over exponential strips") {
  auto cfg = config(MapSpec::counterexample(box(-3, -20, 3, 3)), 32);
  RegularityGrowth g;
  auto r = check_counterexample_regularity(cfg, 3, 64, &g);
  CHECK(r.pass);
  REQUIRE(g.cumulative.size() == 3);
  CHECK(g.cumulative[0] >= g.per_strip_floor * 0.95);
  CHECK(g.cumulative[2] > g.cumulative[1]);
  CHECK(g.cumulative[1] > g.cumulative[0]);
}

TEST_CASE("llc constants blow up along the spiral") {
  auto cfg = config(MapSpec::counterexample(box(-3, -20, 3, 3)), 32);
  LlcSeries s;
  auto r = check_counterexample_llc(cfg, 2, 3, &s);
  CHECK(r.pass);
  REQUIRE(s.n.size() == 2);
}

TEST_CASE("upper regularity bound with finite projections") {
  auto cfg = config(MapSpec::graph("0.2*sin(x1+x2)", box(0, 0, 2, 2)), 24);
  auto r = check_upper_regularity_bound(cfg);
  CHECK((r.pass || r.inconclusive));
  CHECK(!r.note.empty());
}

TEST_CASE("check results serialize") {
  auto cfg = config(MapSpec::identity(box(0, 0, 1, 1)), 8);
  auto r = check_analytic_definition(cfg);
  auto j = r.to_json();
  CHECK(j.find("\"pass\"") != std::string::npos);
  CHECK(j.find(r.name) != std::string::npos);
}
