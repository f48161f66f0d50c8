#ifndef QC_MAP_HPP
#define QC_MAP_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qc/expr.hpp"
#include "qc/grid.hpp"

namespace qc {

// Smooth bump profile used by the non-quasisymmetric example map:
// phi(t) = a (1 + tanh t), increasing, bounded, phi(-inf) = 0.
struct BumpProfile {
  double a = 1.0 / (40.0 * M_E);

  double value(double t) const { return a * (1.0 + std::tanh(t)); }
  double deriv(double t) const {
    double c = std::cosh(t);
    return a / (c * c);
  }
  // sup_t (phi + phi'), attained at tanh t = 1/2.
  double sup_phi_plus_dphi() const { return 2.25 * a; }
  // sup_t (phi^2 + phi'^2); used for the exact essential sup of K.
  double sup_phi_sq_plus_dphi_sq() const;
};

enum class MapKind {
  Identity,      // R^2 -> R^2
  Linear,        // x -> M x
  Graph,         // (x1,x2) -> (x1,x2,h(x1,x2))
  ExpPlane,      // (e^{x1} cos x2, e^{x1} sin x2, 0)
  Cylinder,      // (cos x1, sin x1, x2)
  Counterexample,  // (e^{x1} cos x2, e^{x1} sin x2, phi(x2) e^{x1})
  UserExpr
};

// A parametrized map f: Omega subset R^2 -> R^m with its domain box.
struct MapSpec {
  MapKind kind = MapKind::Identity;
  int n = 2;
  int m = 2;
  Box2 domain;
  Eigen::MatrixXd M;                 // Linear
  std::optional<Expr> graph_height;  // Graph
  std::vector<Expr> components;      // UserExpr, size m
  BumpProfile phi;                   // Counterexample

  static MapSpec identity(Box2 d);
  static MapSpec linear(const Eigen::MatrixXd& M, Box2 d);
  static MapSpec graph(const std::string& height_expr, Box2 d);
  static MapSpec exp_plane(Box2 d);
  static MapSpec cylinder(Box2 d);
  static MapSpec counterexample(Box2 d, double a = 1.0 / (40.0 * M_E));
  static MapSpec user(const std::vector<std::string>& exprs, Box2 d);

  Eigen::VectorXd eval(const Eigen::Vector2d& x) const;
  bool has_analytic_jacobian() const;
  Eigen::MatrixXd analytic_jacobian(const Eigen::Vector2d& x) const;
};

struct Jet {
  Eigen::Vector2d x;
  Eigen::VectorXd value;
  Eigen::MatrixXd Df;  // m x n
};

// Default FD step h = 1e-5 (1 + |x|).
double default_fd_step(const Eigen::Vector2d& x);

// Central-difference Jacobian, independent of any analytic formulas.
Eigen::MatrixXd fd_jacobian(const MapSpec& map, const Eigen::Vector2d& x,
                            double h);

// Jet at x: analytic Jacobian for builtins with closed-form derivatives,
// central differences otherwise. Throws if x is within h of the domain
// boundary, naming the offending axis.
Jet differential(const MapSpec& map, const Eigen::Vector2d& x, double h = 0);

}  // namespace qc

#endif
