#include "qc/map.hpp"

#include <cmath>
#include <stdexcept>

namespace qc {

double BumpProfile::sup_phi_sq_plus_dphi_sq() const {
  // Maximize (1+s)^2 + (1-s^2)^2 over s = tanh t in [-1,1] by dense scan
  // plus ternary refinement; the function is smooth and single-peaked on
  // the relevant branch.
  auto g = [](double s) {
    double u = 1.0 + s, v = 1.0 - s * s;
    return u * u + v * v;
  };
  double best = 0.0, sbest = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    double s = -1.0 + 2.0 * i / 1000.0;
    if (g(s) > best) {
      best = g(s);
      sbest = s;
    }
  }
  double lo = std::max(-1.0, sbest - 0.01), hi = std::min(1.0, sbest + 0.01);
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (g(m1) < g(m2))
      lo = m1;
    else
      hi = m2;
  }
  return a * a * g(0.5 * (lo + hi));
}

MapSpec MapSpec::identity(Box2 d) {
  MapSpec s;
  s.kind = MapKind::Identity;
  s.m = 2;
  s.domain = d;
  return s;
}

MapSpec MapSpec::linear(const Eigen::MatrixXd& M, Box2 d) {
  if (M.cols() != 2) throw std::invalid_argument("linear map: M must be m x 2");
  MapSpec s;
  s.kind = MapKind::Linear;
  s.m = static_cast<int>(M.rows());
  s.M = M;
  s.domain = d;
  return s;
}

MapSpec MapSpec::graph(const std::string& height_expr, Box2 d) {
  MapSpec s;
  s.kind = MapKind::Graph;
  s.m = 3;
  s.graph_height = Expr::parse(height_expr, 2);
  s.domain = d;
  return s;
}

MapSpec MapSpec::exp_plane(Box2 d) {
  MapSpec s;
  s.kind = MapKind::ExpPlane;
  s.m = 3;
  s.domain = d;
  return s;
}

MapSpec MapSpec::cylinder(Box2 d) {
  MapSpec s;
  s.kind = MapKind::Cylinder;
  s.m = 3;
  s.domain = d;
  return s;
}

MapSpec MapSpec::counterexample(Box2 d, double a) {
  if (!(a > 0) || a * M_E * 2 >= 0.1)
    throw std::invalid_argument(
        "counterexample map: need a > 0 with phi(-2pi) e < 1/10");
  MapSpec s;
  s.kind = MapKind::Counterexample;
  s.m = 3;
  s.phi.a = a;
  s.domain = d;
  return s;
}

MapSpec MapSpec::user(const std::vector<std::string>& exprs, Box2 d) {
  if (exprs.size() < 2)
    throw std::invalid_argument("user map: need m >= 2 component expressions");
  MapSpec s;
  s.kind = MapKind::UserExpr;
  s.m = static_cast<int>(exprs.size());
  for (const auto& e : exprs) s.components.push_back(Expr::parse(e, 2));
  s.domain = d;
  return s;
}

Eigen::VectorXd MapSpec::eval(const Eigen::Vector2d& x) const {
  Eigen::VectorXd y(m);
  switch (kind) {
    case MapKind::Identity:
      y = x;
      break;
    case MapKind::Linear:
      y = M * x;
      break;
    case MapKind::Graph:
      y << x.x(), x.y(), graph_height->eval({x.x(), x.y()});
      break;
    case MapKind::ExpPlane: {
      double r = std::exp(x.x());
      y << r * std::cos(x.y()), r * std::sin(x.y()), 0.0;
      break;
    }
    case MapKind::Cylinder:
      y << std::cos(x.x()), std::sin(x.x()), x.y();
      break;
    case MapKind::Counterexample: {
      double r = std::exp(x.x());
      y << r * std::cos(x.y()), r * std::sin(x.y()), phi.value(x.y()) * r;
      break;
    }
    case MapKind::UserExpr:
      for (int i = 0; i < m; ++i) y(i) = components[i].eval({x.x(), x.y()});
      break;
  }
  return y;
}

bool MapSpec::has_analytic_jacobian() const {
  switch (kind) {
    case MapKind::Identity:
    case MapKind::Linear:
    case MapKind::ExpPlane:
    case MapKind::Cylinder:
    case MapKind::Counterexample:
      return true;
    default:
      return false;
  }
}

Eigen::MatrixXd MapSpec::analytic_jacobian(const Eigen::Vector2d& x) const {
  Eigen::MatrixXd J(m, 2);
  switch (kind) {
    case MapKind::Identity:
      J = Eigen::Matrix2d::Identity();
      break;
    case MapKind::Linear:
      J = M;
      break;
    case MapKind::ExpPlane: {
      double r = std::exp(x.x()), c = std::cos(x.y()), s = std::sin(x.y());
      J << r * c, -r * s, r * s, r * c, 0.0, 0.0;
      break;
    }
    case MapKind::Cylinder:
      J << -std::sin(x.x()), 0.0, std::cos(x.x()), 0.0, 0.0, 1.0;
      break;
    case MapKind::Counterexample: {
      double r = std::exp(x.x()), c = std::cos(x.y()), s = std::sin(x.y());
      J << r * c, -r * s, r * s, r * c, phi.value(x.y()) * r,
          phi.deriv(x.y()) * r;
      break;
    }
    default:
      throw std::logic_error("analytic_jacobian: no closed form");
  }
  return J;
}

double default_fd_step(const Eigen::Vector2d& x) {
  return 1e-5 * (1.0 + x.norm());
}

Eigen::MatrixXd fd_jacobian(const MapSpec& map, const Eigen::Vector2d& x,
                            double h) {
  Eigen::MatrixXd J(map.m, 2);
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (map.eval(xp) - map.eval(xm)) / (2.0 * h);
  }
  return J;
}

Jet differential(const MapSpec& map, const Eigen::Vector2d& x, double h) {
  if (h <= 0) h = default_fd_step(x);
  if (!map.has_analytic_jacobian()) {
    const char* axes[2] = {"x1", "x2"};
    for (int j = 0; j < 2; ++j) {
      if (x(j) - h < map.domain.lo(j) || x(j) + h > map.domain.hi(j))
        throw std::invalid_argument(
            std::string("differential: point within step of boundary on "
                        "axis ") +
            axes[j]);
    }
  }
  Jet jet;
  jet.x = x;
  jet.value = map.eval(x);
  jet.Df = map.has_analytic_jacobian() ? map.analytic_jacobian(x)
                                       : fd_jacobian(map, x, h);
  return jet;
}

}  // namespace qc
