#ifndef QC_VERIFY_HPP
#define QC_VERIFY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qc/forms.hpp"
#include "qc/grid.hpp"
#include "qc/jets.hpp"
#include "qc/map.hpp"
#include "qc/surface.hpp"

namespace qc {

struct ExperimentConfig {
  MapSpec map;
  ConstantForm form;
  GridDomain grid;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 1;

  double tol(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

struct CheckResult {
  std::string name;
  bool pass = false;
  bool inconclusive = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string note;
  std::vector<std::string> artifacts;

  std::string to_json() const;
};

// lip^n <= K_emp mu_f pointwise on the scan grid, with mu_f = cb_jacobian
// and K_emp the measured essential sup of the distortion.
CheckResult check_analytic_definition(const ExperimentConfig& cfg);

// H_f = L_f / ell_f over parameter-sphere samples, extrapolated to r -> 0;
// reports the max over sample points.
CheckResult check_metric_definition(const ExperimentConfig& cfg,
                                    const std::vector<double>& radii);
double metric_ratio_sup(const MapSpec& map, const GridDomain& grid,
                        const std::vector<double>& radii, int sphere_samples,
                        int interior_samples);

// Ball measure around f(1,-2pi) of radius 2 restricted to the first N
// exponential-strip preimages grows linearly in N: the image is not upper
// Ahlfors 2-regular.
struct RegularityGrowth {
  std::vector<double> cumulative;  // measure over strips 1..k
  double per_strip_floor = 0.0;    // pi (4 - (phi(-2pi) e)^2)
};
CheckResult check_counterexample_regularity(const ExperimentConfig& cfg, int N,
                                            int strip_resolution = 96,
                                            RegularityGrowth* growth = nullptr);

// llc constants of the balls B_n = B(f(10,-2pi n), phi(-2pi n) e^10).
struct LlcSeries {
  std::vector<int> n;
  std::vector<double> c;
  std::vector<bool> unbounded;
};
CheckResult check_counterexample_llc(const ExperimentConfig& cfg, int n_min,
                                     int n_max, LlcSeries* series = nullptr);

// integral of J(md(f,x)) over the region against the euclidean area
// measure (two estimators of the same Hausdorff measure).
CheckResult check_measure_equality(const ExperimentConfig& cfg,
                                   const GridDomain& region,
                                   int md_points_per_axis = 6,
                                   int md_angles = 64);

// measure(B)/r^n <= C_emp max_I N(f_I) over sampled balls, stable across
// a resolution doubling.
CheckResult check_upper_regularity_bound(const ExperimentConfig& cfg);

// |f(a)-f(b)| <= int_gamma |Df| ds over seeded random polylines, and the
// same with the intrinsic distance on the left.
CheckResult check_upper_gradient(const ExperimentConfig& cfg, int num_paths);

}  // namespace qc

#endif
