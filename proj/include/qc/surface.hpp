#ifndef QC_SURFACE_HPP
#define QC_SURFACE_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "qc/grid.hpp"
#include "qc/map.hpp"

namespace qc {

// Triangulated image surface f(Omega) with parameter coordinates. The
// shortest-path graph carries the mesh vertices plus one level of edge
// midpoints.
struct SurfaceMesh {
  int m = 3;
  std::vector<Eigen::VectorXd> vertices;      // points in R^m
  std::vector<Eigen::Vector2d> param_coords;  // preimage grid node
  std::vector<std::array<int, 3>> triangles;

  // lattice bookkeeping: vertex id of grid node (i,j)
  int nx = 0, ny = 0;
  int node_id(int i, int j) const { return j * (nx + 1) + i; }

  // subdivided path graph: nodes 0..V-1 are vertices, then midpoints
  struct GraphEdge {
    int to;
    double len;
    int tri_a, tri_b;  // adjacent triangle(s), -1 if none
  };
  std::vector<Eigen::VectorXd> graph_points;
  std::vector<std::vector<GraphEdge>> adjacency;

  double triangle_area(int t) const;
  double total_area() const;
  int nearest_vertex(const Eigen::VectorXd& p) const;

  std::string to_off() const;
  std::string to_json() const;
};

// Image of the grid lattice with two triangles per cell (alternating
// diagonals) and a midpoint-subdivided edge graph. Throws on a
// degenerate triangle, naming the cell.
SurfaceMesh triangulate(const MapSpec& map, const GridDomain& grid);

// Shortest-path distance between graph nodes (vertex ids are graph node
// ids). Upper bound on the intrinsic metric, converging under refinement.
double intrinsic_distance(const SurfaceMesh& mesh, int p, int q);

// Distances from one source to every graph node (Dijkstra).
std::vector<double> intrinsic_distances_from(const SurfaceMesh& mesh,
                                             int source);

enum class BallMetric { Euclidean, Intrinsic };

// Hausdorff measure of B(center, r) on the mesh: triangle areas clipped by
// 16-fold sub-triangle sampling. Intrinsic balls measure graph distance
// from the vertex nearest to `center`.
double ball_measure(const SurfaceMesh& mesh, const Eigen::VectorXd& center,
                    double r, BallMetric metric = BallMetric::Euclidean);

struct LlcResult {
  double c = 1.0;
  bool unbounded = false;  // no c <= c_max joins all sampled pairs
};

// Smallest c such that every sampled pair of graph nodes in B(center, r)
// is joined by an edge path inside B(center, c r); bisection with
// connectivity search restricted to the enlarged ball.
LlcResult llc_constant(const SurfaceMesh& mesh, const Eigen::VectorXd& center,
                       double r, double c_max = 1e6);

struct MultiplicityResult {
  int count = 0;
  bool boundary_flagged = false;  // a root sat on a cell boundary
  bool unstable = false;          // doubled-resolution recount disagreed
};

// Number of preimages of y_I under f_I = pi_I o f on the grid, via cell
// bracketing and Newton polishing.
MultiplicityResult projection_multiplicity(const MapSpec& map,
                                           const std::vector<int>& I,
                                           const Eigen::VectorXd& y,
                                           const GridDomain& grid);

// md(f,x)(v) for a fan of directions at once: builds a polar patch mesh
// around x (the straight rays are lattice directions, so the Dijkstra
// bound is tight) and Richardson-extrapolates d(f(x+rv), f(x))/r over the
// given decreasing radii.
struct MdProfile {
  std::vector<double> md;       // one per direction
  bool convergence_warning = false;
};

MdProfile metric_differential_profile(const MapSpec& map,
                                      const Eigen::Vector2d& x,
                                      const std::vector<Eigen::Vector2d>& dirs,
                                      const std::vector<double>& radii,
                                      int rings_per_radius = 24);

double metric_differential(const MapSpec& map, const Eigen::Vector2d& x,
                           const Eigen::Vector2d& v,
                           const std::vector<double>& radii);

// Jacobian of a seminorm from >= 64 uniform angular samples:
// J = omega_n n (integral of md^{-n} over S^{n-1})^{-1}; 0 if any sample
// vanishes.
double jacobian_of_seminorm(const std::vector<double>& samples, int n);

}  // namespace qc

#endif
