#ifndef QC_JETS_HPP
#define QC_JETS_HPP

#include <Eigen/Dense>
#include <vector>

#include "qc/forms.hpp"
#include "qc/grid.hpp"
#include "qc/map.hpp"

namespace qc {

// Largest singular value of Df.
double operator_norm(const Eigen::MatrixXd& Df);

// sqrt(det(Df^T Df)), cross-checked against sqrt(sum_I J_I^2) over all
// minors (Cauchy-Binet). Disagreement beyond 1e-10 relative throws.
double cb_jacobian(const Eigen::MatrixXd& Df);

struct DistortionSample {
  Eigen::Vector2d x;
  double K = 0.0;            // comass * |Df|^n / star, NaN if degenerate
  double star = 0.0;         // star f^* omega
  double op_norm = 0.0;      // |Df|
  double cb_jac = 0.0;       // sqrt(det(Df^T Df))
  bool degenerate = false;   // star <= 0
};

struct DistortionReport {
  std::vector<DistortionSample> samples;
  double ess_sup_K = 0.0;       // max K over non-degenerate samples
  double p999_K = 0.0;          // 99.9th percentile of K
  double empirical_C = 0.0;     // max cb_jac / star (see Thm hypotheses)
  std::vector<Eigen::Vector2d> degenerate_points;
};

// K(x) for one jet; returns NaN (degenerate) when star f^*omega <= 0.
double pointwise_distortion(double comass_value, const ConstantForm& form,
                            const Jet& jet);

// Evaluates pointwise distortion on all active grid cell centers. Throws
// if every sample is degenerate.
DistortionReport distortion_scan(const MapSpec& map, const ConstantForm& form,
                                 const GridDomain& grid);

// Riemann-sum Hausdorff n-measure of f(region) via the area formula
// (injective f, caller-asserted): sum cb_jacobian * cell area.
double area_measure(const MapSpec& map, const GridDomain& region);

}  // namespace qc

#endif
