#ifndef QC_GRID_HPP
#define QC_GRID_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace qc {

// Axis-aligned box in R^2. All builtin maps are parametrized over planar
// domains, so grids are two-dimensional throughout.
struct Box2 {
  Eigen::Vector2d lo{0, 0};
  Eigen::Vector2d hi{1, 1};

  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  bool contains(const Eigen::Vector2d& p, double margin = 0.0) const {
    return p.x() >= lo.x() + margin && p.x() <= hi.x() - margin &&
           p.y() >= lo.y() + margin && p.y() <= hi.y() - margin;
  }
};

// Uniform cell grid over a box with an optional cell mask (annuli etc.).
struct GridDomain {
  Box2 box;
  int nx = 4, ny = 4;
  std::function<bool(const Eigen::Vector2d&)> mask;  // on cell centers

  GridDomain() = default;
  GridDomain(Box2 b, int nx_, int ny_,
             std::function<bool(const Eigen::Vector2d&)> mask_ = nullptr)
      : box(b), nx(nx_), ny(ny_), mask(std::move(mask_)) {
    if (nx < 4 || ny < 4)
      throw std::invalid_argument("GridDomain: resolution >= 4 per axis");
  }

  double hx() const { return box.width() / nx; }
  double hy() const { return box.height() / ny; }
  double cell_area() const { return hx() * hy(); }

  Eigen::Vector2d center(int i, int j) const {
    return {box.lo.x() + (i + 0.5) * hx(), box.lo.y() + (j + 0.5) * hy()};
  }
  Eigen::Vector2d node(int i, int j) const {  // lattice corner (i,j)
    return {box.lo.x() + i * hx(), box.lo.y() + j * hy()};
  }
  bool cell_active(int i, int j) const {
    return !mask || mask(center(i, j));
  }
};

// Annulus mask r0 <= |x| <= r1 on cell centers.
inline std::function<bool(const Eigen::Vector2d&)> annulus_mask(double r0,
                                                                double r1) {
  return [r0, r1](const Eigen::Vector2d& p) {
    double r = p.norm();
    return r >= r0 && r <= r1;
  };
}

}  // namespace qc

#endif
