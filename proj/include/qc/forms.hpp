#ifndef QC_FORMS_HPP
#define QC_FORMS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace qc {

// Strictly increasing tuple of 1-based coordinate indices selecting n rows
// out of m.
struct MultiIndex {
  std::vector<int> idx;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> v) : idx(std::move(v)) {}

  int size() const { return static_cast<int>(idx.size()); }
  bool valid(int n, int m) const;
  bool operator==(const MultiIndex& o) const { return idx == o.idx; }
  bool operator<(const MultiIndex& o) const { return idx < o.idx; }
  std::string str() const;
};

// Enumerates all C(m,n) multi-indices in lexicographic order.
std::vector<MultiIndex> all_multi_indices(int n, int m);

// Constant-coefficient n-form in R^m, stored as coefficients over
// multi-indices: omega = sum_I c_I dx_I.
struct ConstantForm {
  int n = 0;
  int m = 0;
  std::vector<std::pair<MultiIndex, double>> coeffs;

  ConstantForm() = default;
  ConstantForm(int n_, int m_, std::vector<std::pair<MultiIndex, double>> c);

  // Throws std::invalid_argument on a malformed form.
  void validate() const;
  bool simple() const;  // exactly one nonzero coefficient

  // omega(v_1,...,v_n) where the v_i are the columns of V (m x n).
  double apply(const Eigen::MatrixXd& V) const;

  ConstantForm scaled(double c) const;

  std::string to_json() const;
  static ConstantForm from_json(const std::string& text);
};

// dx_{i1} ^ ... ^ dx_{in} with coefficient c.
ConstantForm simple_form(int m, const std::vector<int>& I, double c = 1.0);

struct ComassBudget {
  int starts = 64;
  int max_iters = 500;
  double tol = 1e-8;          // frame-update tolerance
  int random_samples = 4096;  // certified lower bound via sampling
  std::uint64_t seed = 1;
};

struct ComassResult {
  double value = 0.0;   // best |omega(frame)| found (certified lower bound)
  bool exact = false;   // analytic short-circuit (simple forms)
  bool converged = false;
};

// sup over orthonormal n-frames of |omega(v_1,...,v_n)|, by multi-start
// projected gradient ascent on the Stiefel manifold plus random sampling.
// Simple forms return |c| exactly.
ComassResult comass(const ConstantForm& form, const ComassBudget& budget = {});

// The scalar with f^*omega = (star) dx_1^...^dx_n, i.e. sum_I c_I J_I(Df).
// Df must be m x n.
double pullback_star(const ConstantForm& form, const Eigen::MatrixXd& Df);

// n x n minor of the m x n matrix Df with rows selected by I.
double minor_det(const Eigen::MatrixXd& Df, const MultiIndex& I);

}  // namespace qc

#endif
