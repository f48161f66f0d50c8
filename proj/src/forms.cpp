#include "qc/forms.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qc {

bool MultiIndex::valid(int n, int m) const {
  if (static_cast<int>(idx.size()) != n) return false;
  int prev = 0;
  for (int i : idx) {
    if (i <= prev || i > m) return false;
    prev = i;
  }
  return true;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
  os << ")";
  return os.str();
}

std::vector<MultiIndex> all_multi_indices(int n, int m) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(n);
  // iterative combination enumeration
  for (int i = 0; i < n; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(cur);
    int k = n - 1;
    while (k >= 0 && cur[k] == m - (n - 1 - k)) --k;
    if (k < 0) break;
    ++cur[k];
    for (int j = k + 1; j < n; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

ConstantForm::ConstantForm(int n_, int m_,
                           std::vector<std::pair<MultiIndex, double>> c)
    : n(n_), m(m_), coeffs(std::move(c)) {
  validate();
}

void ConstantForm::validate() const {
  if (n < 1 || n > m)
    throw std::invalid_argument("ConstantForm: need 1 <= n <= m");
  bool nonzero = false;
  for (const auto& [I, c] : coeffs) {
    if (!I.valid(n, m))
      throw std::invalid_argument("ConstantForm: bad multi-index " + I.str());
    if (c != 0.0) nonzero = true;
  }
  if (!nonzero)
    throw std::invalid_argument("ConstantForm: all coefficients vanish");
}

bool ConstantForm::simple() const {
  int nz = 0;
  for (const auto& [I, c] : coeffs)
    if (c != 0.0) ++nz;
  return nz == 1;
}

double minor_det(const Eigen::MatrixXd& Df, const MultiIndex& I) {
  const int n = I.size();
  if (Df.cols() != n)
    throw std::invalid_argument("minor_det: Df has wrong column count");
  Eigen::MatrixXd A(n, n);
  for (int r = 0; r < n; ++r) {
    if (I.idx[r] < 1 || I.idx[r] > Df.rows())
      throw std::invalid_argument("minor_det: index out of range");
    A.row(r) = Df.row(I.idx[r] - 1);
  }
  switch (n) {
    case 1:
      return A(0, 0);
    case 2:
      return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    case 3:
      return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
             A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
             A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    default:
      return A.partialPivLu().determinant();
  }
}

double ConstantForm::apply(const Eigen::MatrixXd& V) const {
  double s = 0.0;
  for (const auto& [I, c] : coeffs)
    if (c != 0.0) s += c * minor_det(V, I);
  return s;
}

ConstantForm ConstantForm::scaled(double c) const {
  ConstantForm out = *this;
  for (auto& p : out.coeffs) p.second *= c;
  return out;
}

double pullback_star(const ConstantForm& form, const Eigen::MatrixXd& Df) {
  if (Df.rows() != form.m || Df.cols() != form.n)
    throw std::invalid_argument("pullback_star: Df shape mismatch, want " +
                                std::to_string(form.m) + "x" +
                                std::to_string(form.n));
  return form.apply(Df);
}

ConstantForm simple_form(int m, const std::vector<int>& I, double c) {
  return ConstantForm(static_cast<int>(I.size()), m, {{MultiIndex(I), c}});
}

namespace {

// d omega(V) / dV: cofactor expansion of each minor.
Eigen::MatrixXd form_gradient(const ConstantForm& form,
                              const Eigen::MatrixXd& V) {
  const int n = form.n;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(form.m, n);
  Eigen::MatrixXd A(n, n), sub(n - 1, n - 1);
  for (const auto& [I, c] : form.coeffs) {
    if (c == 0.0) continue;
    for (int r = 0; r < n; ++r) A.row(r) = V.row(I.idx[r] - 1);
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) {
        int rr = 0;
        for (int a = 0; a < n; ++a) {
          if (a == r) continue;
          int cc = 0;
          for (int b = 0; b < n; ++b) {
            if (b == j) continue;
            sub(rr, cc++) = A(a, b);
          }
          ++rr;
        }
        double cof = ((r + j) % 2 ? -1.0 : 1.0);
        if (n == 1)
          cof *= 1.0;
        else if (n == 2)
          cof *= sub(0, 0);
        else
          cof *= sub.partialPivLu().determinant();
        G(I.idx[r] - 1, j) += c * cof;
      }
    }
  }
  return G;
}

// Thin-QR retraction with a deterministic sign convention.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& V) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
  Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(V.rows(), V.cols());
  Eigen::MatrixXd R = qr.matrixQR().topRows(V.cols());
  for (int j = 0; j < V.cols(); ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

}  // namespace

ComassResult comass(const ConstantForm& form, const ComassBudget& budget) {
  form.validate();
  ComassResult res;
  if (form.simple()) {
    for (const auto& [I, c] : form.coeffs)
      if (c != 0.0) res.value = std::abs(c);
    res.exact = true;
    res.converged = true;
    return res;
  }

  std::mt19937_64 rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_frame = [&] {
    Eigen::MatrixXd V(form.m, form.n);
    for (int i = 0; i < form.m; ++i)
      for (int j = 0; j < form.n; ++j) V(i, j) = gauss(rng);
    return orthonormalize(V);
  };

  double best = 0.0;
  for (int s = 0; s < budget.random_samples; ++s)
    best = std::max(best, std::abs(form.apply(random_frame())));

  for (int s = 0; s < budget.starts; ++s) {
    Eigen::MatrixXd V = random_frame();
    double val = form.apply(V);
    double sign = val >= 0 ? 1.0 : -1.0;
    double step = 0.5;
    for (int it = 0; it < budget.max_iters; ++it) {
      Eigen::MatrixXd G = sign * form_gradient(form, V);
      Eigen::MatrixXd Vn = orthonormalize(V + step * G);
      double vn = form.apply(Vn);
      if (std::abs(vn) <= std::abs(val)) {
        step *= 0.5;
        if (step < 1e-14) break;
        continue;
      }
      double delta = (Vn - V).norm();
      V = Vn;
      val = vn;
      sign = val >= 0 ? 1.0 : -1.0;
      if (delta < budget.tol) {
        res.converged = true;
        break;
      }
    }
    best = std::max(best, std::abs(val));
  }
  res.value = best;
  return res;
}

std::string ConstantForm::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [I, c] : coeffs)
    j["coeffs"].push_back({{"I", I.idx}, {"c", c}});
  return j.dump();
}

ConstantForm ConstantForm::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::pair<MultiIndex, double>> cs;
  for (const auto& e : j.at("coeffs"))
    cs.emplace_back(MultiIndex(e.at("I").get<std::vector<int>>()),
                    e.at("c").get<double>());
  return ConstantForm(j.at("n").get<int>(), j.at("m").get<int>(),
                      std::move(cs));
}

}  // namespace qc
