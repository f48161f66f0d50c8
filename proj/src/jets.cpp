#include "qc/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qc {

double operator_norm(const Eigen::MatrixXd& Df) {
  if (Df.cols() == 2) {
    // closed form from the 2x2 Gram matrix
    double a = Df.col(0).squaredNorm();
    double b = Df.col(1).squaredNorm();
    double c = Df.col(0).dot(Df.col(1));
    double tr = a + b;
    double disc = std::sqrt(std::max(0.0, (a - b) * (a - b) + 4 * c * c));
    return std::sqrt(0.5 * (tr + disc));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Df);
  return svd.singularValues()(0);
}

double cb_jacobian(const Eigen::MatrixXd& Df) {
  const int n = static_cast<int>(Df.cols());
  const int m = static_cast<int>(Df.rows());
  Eigen::MatrixXd G = Df.transpose() * Df;
  double gram = std::sqrt(std::max(0.0, G.determinant()));
  double sumsq = 0.0;
  for (const auto& I : all_multi_indices(n, m)) {
    double J = minor_det(Df, I);
    sumsq += J * J;
  }
  double binet = std::sqrt(sumsq);
  double scale = std::max({1.0, gram, binet});
  if (std::abs(gram - binet) > 1e-10 * scale)
    throw std::runtime_error(
        "cb_jacobian: Gram and minor-sum routes disagree: " +
        std::to_string(gram) + " vs " + std::to_string(binet));
  return gram;
}

double pointwise_distortion(double comass_value, const ConstantForm& form,
                            const Jet& jet) {
  double star = pullback_star(form, jet.Df);
  if (star <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  double s = operator_norm(jet.Df);
  return comass_value * std::pow(s, form.n) / star;
}

DistortionReport distortion_scan(const MapSpec& map, const ConstantForm& form,
                                 const GridDomain& grid) {
  double w = comass(form).value;
  DistortionReport rep;
  std::vector<double> Ks;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.cell_active(i, j)) continue;
      Jet jet = differential(map, grid.center(i, j));
      DistortionSample s;
      s.x = jet.x;
      s.star = pullback_star(form, jet.Df);
      s.op_norm = operator_norm(jet.Df);
      s.cb_jac = cb_jacobian(jet.Df);
      if (s.star <= 0.0) {
        s.degenerate = true;
        s.K = std::numeric_limits<double>::quiet_NaN();
        rep.degenerate_points.push_back(s.x);
      } else {
        s.K = w * std::pow(s.op_norm, form.n) / s.star;
        Ks.push_back(s.K);
        rep.ess_sup_K = std::max(rep.ess_sup_K, s.K);
        rep.empirical_C = std::max(rep.empirical_C, s.cb_jac / s.star);
      }
      rep.samples.push_back(std::move(s));
    }
  }
  if (Ks.empty())
    throw std::runtime_error(
        "distortion_scan: form pullback nonpositive everywhere");
  std::sort(Ks.begin(), Ks.end());
  size_t idx = static_cast<size_t>(0.999 * (Ks.size() - 1));
  rep.p999_K = Ks[idx];
  return rep;
}

double area_measure(const MapSpec& map, const GridDomain& region) {
  double total = 0.0;
  const double a = region.cell_area();
  for (int j = 0; j < region.ny; ++j)
    for (int i = 0; i < region.nx; ++i) {
      if (!region.cell_active(i, j)) continue;
      Jet jet = differential(map, region.center(i, j));
      total += cb_jacobian(jet.Df) * a;
    }
  return total;
}

}  // namespace qc
