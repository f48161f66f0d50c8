#ifndef QC_MODULUS_HPP
#define QC_MODULUS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qc/forms.hpp"
#include "qc/grid.hpp"
#include "qc/map.hpp"
#include "qc/surface.hpp"

namespace qc {

// Shortest-path graph carrying a piecewise-constant density: one value per
// "cell" (grid cell or mesh triangle). Each edge charges its euclidean
// length against one or two cells.
struct ModulusGraph {
  struct Edge {
    int to;
    double len;
    int cell_a, cell_b;        // density cells, cell_b may be -1
    double share_a, share_b;   // fractions of len charged to each cell
  };
  std::vector<std::vector<Edge>> adj;
  std::vector<double> cell_measure;
  int num_nodes() const { return static_cast<int>(adj.size()); }
  int num_cells() const { return static_cast<int>(cell_measure.size()); }
};

// 8-connected lattice-vertex graph over the active cells of a grid.
// Node ids equal SurfaceMesh::node_id over the same grid.
ModulusGraph build_grid_graph(const GridDomain& grid);

// Vertex+midpoint graph of a triangulated surface; densities live on
// triangles.
ModulusGraph build_mesh_graph(const SurfaceMesh& mesh);

// Curve family connecting the node sets E and F inside the ambient graph.
struct PathFamily {
  std::vector<int> source;  // E
  std::vector<int> target;  // F
};

// Named boundary selectors on grid lattice vertices.
// Supported: left-edge | right-edge | bottom-edge | top-edge | circle r=<v>
std::vector<int> select_boundary(const GridDomain& grid,
                                 const std::string& selector);

struct Density {
  std::vector<double> values;  // per cell
  int exponent = 2;
};

struct ModulusResult {
  double modulus = 0.0;
  Density density;
  double certificate = 0.0;  // final shortest rho-length (>= 1 - tol)
  int iterations = 0;
  int active_paths = 0;
  bool degenerate = false;   // E and F intersect: modulus = +inf
  bool empty_family = false; // E, F disconnected: modulus = 0
};

// Discrete n-modulus of the E-F connecting family by constraint
// generation: the convex subproblem over the active path set alternates
// with rho-weighted shortest-path separation until every connecting path
// has rho-length >= 1 - tol.
ModulusResult discrete_modulus(const ModulusGraph& graph,
                               const PathFamily& family, double exponent = 2,
                               double tol = 1e-3);

// Image family on the triangulation of the same grid: node ids carry over
// verbatim (mesh vertices are the images of the lattice nodes).
PathFamily pushforward_family(const PathFamily& family,
                              const SurfaceMesh& mesh);

struct LowerModulusReport {
  double mod_domain = 0.0;
  double mod_image = 0.0;
  double K_emp = 0.0;
  bool pass = false;
};

// Thm-style check: mod Gamma <= K_emp mod f(Gamma) (1 + tol), with K_emp
// from a distortion scan of the map over the grid.
LowerModulusReport verify_lower_modulus(const MapSpec& map,
                                        const ConstantForm& form,
                                        const GridDomain& grid,
                                        const PathFamily& family,
                                        double tol = 0.05);

}  // namespace qc

#endif
