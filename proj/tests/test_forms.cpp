#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "qc/forms.hpp"
#include "qc/map.hpp"

using namespace qc;

namespace {

// Orthonormal 2-frame in R^m from a random Gaussian matrix.
Eigen::MatrixXd random_frame(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  return Q;
}

}  // namespace

TEST_CASE("multi-index enumeration") {
  auto idx = all_multi_indices(2, 4);
  CHECK(idx.size() == 6);
  CHECK(idx.front().str() == "(1,2)");
  CHECK(idx.back().str() == "(3,4)");
  for (size_t k = 1; k < idx.size(); ++k) CHECK(idx[k - 1] < idx[k]);
  CHECK(all_multi_indices(3, 7).size() == 35);
  CHECK(MultiIndex({1, 3}).valid(2, 4));
  CHECK(!MultiIndex({3, 1}).valid(2, 4));
  CHECK(!MultiIndex({1, 5}).valid(2, 4));
}

TEST_CASE("form validation") {
  CHECK_THROWS(ConstantForm(3, 2, {{MultiIndex({1, 2, 3}), 1.0}}).validate());
  CHECK_THROWS(simple_form(3, {2, 1}));
  auto f = simple_form(3, {1, 2});
  CHECK(f.simple());
  CHECK(!simple_form(4, {1, 2}).scaled(0.0).simple());
}

TEST_CASE("apply is alternating and multilinear") {
  std::mt19937_64 rng(7);
  ConstantForm w(2, 4,
                 {{MultiIndex({1, 2}), 1.0}, {MultiIndex({3, 4}), 1.0}});
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd V(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) V(i, j) = g(rng);
    Eigen::MatrixXd Vs = V;
    Vs.col(0).swap(Vs.col(1));
    CHECK(w.apply(Vs) == doctest::Approx(-w.apply(V)).epsilon(1e-12));
    Eigen::MatrixXd V2 = V;
    V2.col(0) *= 3.0;
    CHECK(w.apply(V2) == doctest::Approx(3.0 * w.apply(V)).epsilon(1e-12));
  }
}

TEST_CASE("json round trip") {
  ConstantForm w(2, 4,
                 {{MultiIndex({1, 2}), 1.5}, {MultiIndex({2, 4}), -0.25}});
  auto w2 = ConstantForm::from_json(w.to_json());
  CHECK(w2.n == w.n);
  CHECK(w2.m == w.m);
  REQUIRE(w2.coeffs.size() == w.coeffs.size());
  for (size_t k = 0; k < w.coeffs.size(); ++k) {
    CHECK(w2.coeffs[k].first == w.coeffs[k].first);
    CHECK(w2.coeffs[k].second == w.coeffs[k].second);
  }
}

TEST_CASE("minors against LU") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd Df(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) Df(i, j) = g(rng);
  for (const auto& I : all_multi_indices(3, 5)) {
    Eigen::Matrix3d sub;
    for (int r = 0; r < 3; ++r) sub.row(r) = Df.row(I.idx[r] - 1);
    CHECK(minor_det(Df, I) == doctest::Approx(sub.determinant()).epsilon(1e-12));
  }
}

TEST_CASE("pullback star of the builtin example") {
  // f = (e^x cos y, e^x sin y, phi(y) e^x): star f^* (dx1 ^ dx2) = e^{2x}.
  BumpProfile phi;
  auto w = simple_form(3, {1, 2});
  for (double x : {-1.0, 0.0, 0.7})
    for (double y : {-2.0, 0.3, 4.0}) {
      double ex = std::exp(x);
      Eigen::MatrixXd Df(3, 2);
      Df << ex * std::cos(y), -ex * std::sin(y),
            ex * std::sin(y),  ex * std::cos(y),
            phi.value(y) * ex, phi.deriv(y) * ex;
      CHECK(pullback_star(w, Df) ==
            doctest::Approx(std::exp(2 * x)).epsilon(1e-12));
    }
}

TEST_CASE("comass of simple forms is exact") {
  auto r = comass(simple_form(3, {1, 2}, -2.5));
  CHECK(r.exact);
  CHECK(r.value == doctest::Approx(2.5));
  auto r2 = comass(simple_form(5, {2, 4, 5}));
  CHECK(r2.exact);
  CHECK(r2.value == doctest::Approx(1.0));
}

TEST_CASE("comass of dx12 + dx34 in R^4") {
  ConstantForm w(2, 4,
                 {{MultiIndex({1, 2}), 1.0}, {MultiIndex({3, 4}), 1.0}});
  ComassBudget b;
  b.seed = 3;
  auto r = comass(w, b);
  CHECK(r.converged);
  // operator-norm value of the associated skew form
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));

  // independent lower bound from random frames
  std::mt19937_64 rng(99);
  double best = 0.0;
  for (int k = 0; k < 20000; ++k)
    best = std::max(best, std::abs(w.apply(random_frame(4, 2, rng))));
  CHECK(r.value >= best - 1e-9);
}

TEST_CASE("comass homogeneity") {
  ConstantForm w(2, 4,
                 {{MultiIndex({1, 2}), 0.7}, {MultiIndex({1, 3}), -0.4},
                  {MultiIndex({2, 4}), 1.1}});
  ComassBudget b;
  b.starts = 24;
  b.random_samples = 1024;
  double base = comass(w, b).value;
  CHECK(comass(w.scaled(-3.0), b).value ==
        doctest::Approx(3.0 * base).epsilon(1e-6));
}

TEST_CASE("comass never exceeds the coefficient l1 bound") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::pair<MultiIndex, double>> cs;
    double l1 = 0.0;
    for (const auto& I : all_multi_indices(2, 4)) {
      double c = g(rng);
      cs.emplace_back(I, c);
      l1 += std::abs(c);
    }
    ComassBudget b;
    b.starts = 16;
    b.random_samples = 512;
    b.seed = 17 + rep;
    CHECK(comass(ConstantForm(2, 4, cs), b).value <= l1 + 1e-9);
  }
}
