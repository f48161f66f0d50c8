#include "qc/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qc {

namespace {

double tri_area(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const Eigen::VectorXd& c) {
  Eigen::VectorXd u = b - a, v = c - a;
  double g11 = u.squaredNorm(), g22 = v.squaredNorm(), g12 = u.dot(v);
  return 0.5 * std::sqrt(std::max(0.0, g11 * g22 - g12 * g12));
}

}  // namespace

double SurfaceMesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  return tri_area(vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]);
}

double SurfaceMesh::total_area() const {
  double s = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t)
    s += triangle_area(static_cast<int>(t));
  return s;
}

int SurfaceMesh::nearest_vertex(const Eigen::VectorXd& p) const {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vertices.size(); ++i) {
    double d = (vertices[i] - p).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

SurfaceMesh triangulate(const MapSpec& map, const GridDomain& grid) {
  SurfaceMesh mesh;
  mesh.m = map.m;
  mesh.nx = grid.nx;
  mesh.ny = grid.ny;
  mesh.vertices.reserve((grid.nx + 1) * (grid.ny + 1));
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i) {
      Eigen::Vector2d p = grid.node(i, j);
      mesh.param_coords.push_back(p);
      mesh.vertices.push_back(map.eval(p));
    }

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.cell_active(i, j)) continue;
      int a = mesh.node_id(i, j), b = mesh.node_id(i + 1, j);
      int c = mesh.node_id(i + 1, j + 1), d = mesh.node_id(i, j + 1);
      // alternate the split diagonal to keep the mesh isotropic
      if ((i + j) % 2 == 0) {
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      } else {
        mesh.triangles.push_back({a, b, d});
        mesh.triangles.push_back({b, c, d});
      }
      for (size_t t = mesh.triangles.size() - 2; t < mesh.triangles.size();
           ++t) {
        if (mesh.triangle_area(static_cast<int>(t)) <= 0.0)
          throw std::runtime_error("triangulate: degenerate triangle in cell (" +
                                   std::to_string(i) + "," + std::to_string(j) +
                                   ")");
      }
    }

  // subdivided path graph: vertices, then midpoints of mesh edges
  mesh.graph_points = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint_of;
  auto midpoint = [&](int u, int v) {
    auto key = std::minmax(u, v);
    auto it = midpoint_of.find(key);
    if (it != midpoint_of.end()) return it->second;
    int id = static_cast<int>(mesh.graph_points.size());
    mesh.graph_points.push_back(0.5 * (mesh.vertices[u] + mesh.vertices[v]));
    midpoint_of[key] = id;
    return id;
  };

  std::map<std::pair<int, int>, size_t> edge_slot;
  std::vector<std::array<int, 4>> raw;  // u, v, tri_a, tri_b
  auto add_edge = [&](int u, int v, int tri) {
    auto key = std::minmax(u, v);
    auto it = edge_slot.find(key);
    if (it != edge_slot.end()) {
      raw[it->second][3] = tri;
      return;
    }
    edge_slot[key] = raw.size();
    raw.push_back({key.first, key.second, tri, -1});
  };

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    int ti = static_cast<int>(t);
    auto [a, b, c] = mesh.triangles[t];
    int mab = midpoint(a, b), mbc = midpoint(b, c), mca = midpoint(c, a);
    // halves of the mesh edges (shared between adjacent triangles)
    add_edge(a, mab, ti);
    add_edge(mab, b, ti);
    add_edge(b, mbc, ti);
    add_edge(mbc, c, ti);
    add_edge(c, mca, ti);
    add_edge(mca, a, ti);
    // interior segments: midlines and medians
    add_edge(mab, mbc, ti);
    add_edge(mbc, mca, ti);
    add_edge(mca, mab, ti);
    add_edge(a, mbc, ti);
    add_edge(b, mca, ti);
    add_edge(c, mab, ti);
  }

  mesh.adjacency.assign(mesh.graph_points.size(), {});
  for (const auto& e : raw) {
    double len = (mesh.graph_points[e[0]] - mesh.graph_points[e[1]]).norm();
    mesh.adjacency[e[0]].push_back({e[1], len, e[2], e[3]});
    mesh.adjacency[e[1]].push_back({e[0], len, e[2], e[3]});
  }
  return mesh;
}

std::vector<double> intrinsic_distances_from(const SurfaceMesh& mesh,
                                             int source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(mesh.graph_points.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& e : mesh.adjacency[u]) {
      double nd = d + e.len;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        pq.emplace(nd, e.to);
      }
    }
  }
  return dist;
}

double intrinsic_distance(const SurfaceMesh& mesh, int p, int q) {
  auto dist = intrinsic_distances_from(mesh, p);
  if (!std::isfinite(dist[q]))
    throw std::runtime_error("intrinsic_distance: mesh is disconnected");
  return dist[q];
}

double ball_measure(const SurfaceMesh& mesh, const Eigen::VectorXd& center,
                    double r, BallMetric metric) {
  std::vector<double> vdist;  // per-vertex distance from center
  if (metric == BallMetric::Intrinsic) {
    int src = mesh.nearest_vertex(center);
    vdist = intrinsic_distances_from(mesh, src);
  }
  double total = 0.0;
  const int levels = 4;  // 4x4 = 16 sub-triangles
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    auto [a, b, c] = mesh.triangles[t];
    double area16 = mesh.triangle_area(static_cast<int>(t)) / 16.0;
    // barycentric sub-grid; sub-triangle centroids
    for (int p = 0; p < levels; ++p) {
      for (int q = 0; q < levels - p; ++q) {
        int reps = (q < levels - p - 1) ? 2 : 1;  // upward + downward
        for (int s = 0; s < reps; ++s) {
          double la, lb;
          if (s == 0) {
            la = (p + 1.0 / 3.0) / levels;
            lb = (q + 1.0 / 3.0) / levels;
          } else {
            la = (p + 2.0 / 3.0) / levels;
            lb = (q + 2.0 / 3.0) / levels;
          }
          double lc = 1.0 - la - lb;
          double d;
          if (metric == BallMetric::Euclidean) {
            Eigen::VectorXd pt = la * mesh.vertices[a] +
                                 lb * mesh.vertices[b] +
                                 lc * mesh.vertices[c];
            d = (pt - center).norm();
          } else {
            d = la * vdist[a] + lb * vdist[b] + lc * vdist[c];
          }
          if (d <= r) total += area16;
        }
      }
    }
  }
  return total;
}

LlcResult llc_constant(const SurfaceMesh& mesh, const Eigen::VectorXd& center,
                       double r, double c_max) {
  const size_t N = mesh.graph_points.size();
  std::vector<double> dc(N);
  std::vector<int> inside;
  for (size_t i = 0; i < N; ++i) {
    dc[i] = (mesh.graph_points[i] - center).norm();
    if (dc[i] <= r) inside.push_back(static_cast<int>(i));
  }
  if (inside.size() < 2) return {1.0, false};
  // deterministic subsample of the in-ball nodes
  std::vector<int> sample;
  size_t stride = std::max<size_t>(1, inside.size() / 20);
  for (size_t i = 0; i < inside.size(); i += stride) sample.push_back(inside[i]);
  if (sample.back() != inside.back()) sample.push_back(inside.back());

  auto connected_within = [&](double radius) {
    // BFS from sample[0] over nodes with dc <= radius; all samples reachable?
    std::vector<char> seen(N, 0);
    std::queue<int> bfs;
    bfs.push(sample[0]);
    seen[sample[0]] = 1;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (const auto& e : mesh.adjacency[u]) {
        if (!seen[e.to] && dc[e.to] <= radius) {
          seen[e.to] = 1;
          bfs.push(e.to);
        }
      }
    }
    for (int s : sample)
      if (!seen[s]) return false;
    return true;
  };

  if (!connected_within(c_max * r)) return {c_max, true};
  if (connected_within(r)) return {1.0, false};
  double lo = 1.0, hi = c_max;
  while (hi / lo > 1.001) {
    double mid = std::sqrt(lo * hi);
    if (connected_within(mid * r))
      hi = mid;
    else
      lo = mid;
  }
  return {hi, false};
}

MultiplicityResult projection_multiplicity(const MapSpec& map,
                                           const std::vector<int>& I,
                                           const Eigen::VectorXd& y,
                                           const GridDomain& grid) {
  if (I.size() != 2)
    throw std::invalid_argument("projection_multiplicity: need |I| = 2");
  auto count_at = [&](const GridDomain& g, bool& boundary_flag) {
    Eigen::Vector2d yI(y(I[0] - 1), y(I[1] - 1));
    auto gfun = [&](const Eigen::Vector2d& x) -> Eigen::Vector2d {
      Eigen::VectorXd v = map.eval(x);
      return Eigen::Vector2d(v(I[0] - 1), v(I[1] - 1)) - yI;
    };
    std::vector<Eigen::Vector2d> roots;
    const double hx = g.hx(), hy = g.hy();
    const double btol = 1e-9 * std::max(hx, hy);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!g.cell_active(i, j)) continue;
        // sign-change bracket over the cell corners
        double mn0 = 1e300, mx0 = -1e300, mn1 = 1e300, mx1 = -1e300;
        for (int di = 0; di <= 1; ++di)
          for (int dj = 0; dj <= 1; ++dj) {
            Eigen::Vector2d gv = gfun(g.node(i + di, j + dj));
            mn0 = std::min(mn0, gv(0));
            mx0 = std::max(mx0, gv(0));
            mn1 = std::min(mn1, gv(1));
            mx1 = std::max(mx1, gv(1));
          }
        if (mn0 > 0 || mx0 < 0 || mn1 > 0 || mx1 < 0) continue;
        // Newton polish from the cell center
        Eigen::Vector2d x = g.center(i, j);
        bool ok = false;
        for (int it = 0; it < 40; ++it) {
          Eigen::Vector2d gv = gfun(x);
          if (gv.norm() < 1e-11 * (1.0 + yI.norm())) {
            ok = true;
            break;
          }
          Eigen::Matrix2d J;
          double h = 1e-6 * (1.0 + x.norm());
          for (int col = 0; col < 2; ++col) {
            Eigen::Vector2d xp = x, xm = x;
            xp(col) += h;
            xm(col) -= h;
            J.col(col) = (gfun(xp) - gfun(xm)) / (2 * h);
          }
          if (std::abs(J.determinant()) < 1e-300) break;
          x -= J.inverse() * gv;
        }
        if (!ok) continue;
        Eigen::Vector2d lo = g.node(i, j), hi = g.node(i + 1, j + 1);
        bool in_cell = x.x() >= lo.x() - btol && x.x() <= hi.x() + btol &&
                       x.y() >= lo.y() - btol && x.y() <= hi.y() + btol;
        if (!in_cell) continue;
        if (std::abs(x.x() - lo.x()) < btol || std::abs(x.x() - hi.x()) < btol ||
            std::abs(x.y() - lo.y()) < btol || std::abs(x.y() - hi.y()) < btol)
          boundary_flag = true;
        bool dup = false;
        for (const auto& rt : roots)
          if ((rt - x).norm() < 1e-6 * (1.0 + x.norm())) dup = true;
        if (!dup) roots.push_back(x);
      }
    return static_cast<int>(roots.size());
  };

  MultiplicityResult res;
  res.count = count_at(grid, res.boundary_flagged);
  GridDomain fine(grid.box, grid.nx * 2, grid.ny * 2, grid.mask);
  bool bf2 = false;
  int recount = count_at(fine, bf2);
  res.unstable = (recount != res.count);
  return res;
}

MdProfile metric_differential_profile(const MapSpec& map,
                                      const Eigen::Vector2d& x,
                                      const std::vector<Eigen::Vector2d>& dirs,
                                      const std::vector<double>& radii,
                                      int rings_per_radius) {
  if (radii.empty()) throw std::invalid_argument("md: need radii");
  for (size_t j = 1; j < radii.size(); ++j)
    if (radii[j] >= radii[j - 1])
      throw std::invalid_argument("md: radii must be decreasing");
  for (const auto& v : dirs)
    for (double r : radii)
      if (!map.domain.contains(x + r * v))
        throw std::invalid_argument("md: x + r v leaves the domain");

  // ring radii: union of uniform subdivisions hitting each requested radius
  std::set<double> ring_set;
  for (double r : radii)
    for (int q = 1; q <= rings_per_radius; ++q)
      ring_set.insert(r * q / rings_per_radius);
  std::vector<double> rings(ring_set.begin(), ring_set.end());
  const int R = static_cast<int>(rings.size());
  const int A = static_cast<int>(dirs.size());

  // polar patch graph: node 0 = center, then ring-major angle grid
  auto nid = (+[](int q, int k, int A_) { return 1 + q * A_ + k; });
  std::vector<Eigen::VectorXd> pts(1 + R * A);
  pts[0] = map.eval(x);
  for (int q = 0; q < R; ++q)
    for (int k = 0; k < A; ++k)
      pts[nid(q, k, A)] = map.eval(x + rings[q] * dirs[k]);

  std::vector<std::vector<std::pair<int, double>>> adj(pts.size());
  auto link = [&](int u, int v) {
    double len = (pts[u] - pts[v]).norm();
    adj[u].emplace_back(v, len);
    adj[v].emplace_back(u, len);
  };
  for (int k = 0; k < A; ++k) link(0, nid(0, k, A));
  for (int q = 0; q < R; ++q)
    for (int k = 0; k < A; ++k) {
      int kn = (k + 1) % A;
      link(nid(q, k, A), nid(q, kn, A));
      if (q + 1 < R) {
        link(nid(q, k, A), nid(q + 1, k, A));
        link(nid(q, k, A), nid(q + 1, kn, A));
        link(nid(q, kn, A), nid(q + 1, k, A));
      }
    }

  // Dijkstra from the center
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(pts.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[0] = 0.0;
  pq.emplace(0.0, 0);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, len] : adj[u])
      if (d + len < dist[v]) {
        dist[v] = d + len;
        pq.emplace(dist[v], v);
      }
  }

  std::vector<int> ring_index;
  for (double r : radii) {
    int best = 0;
    for (int q = 1; q < R; ++q)
      if (std::abs(rings[q] - r) < std::abs(rings[best] - r)) best = q;
    ring_index.push_back(best);
  }

  MdProfile prof;
  prof.md.resize(A);
  for (int k = 0; k < A; ++k) {
    // least-squares linear extrapolation of d(r)/r to r = 0
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int J = static_cast<int>(radii.size());
    std::vector<double> ratio(J);
    for (int j = 0; j < J; ++j) {
      ratio[j] = dist[nid(ring_index[j], k, A)] / radii[j];
      sx += radii[j];
      sy += ratio[j];
      sxx += radii[j] * radii[j];
      sxy += radii[j] * ratio[j];
    }
    double md;
    if (J == 1) {
      md = ratio[0];
    } else {
      double denom = J * sxx - sx * sx;
      double slope = (J * sxy - sx * sy) / denom;
      md = (sy - slope * sx) / J;
    }
    prof.md[k] = std::max(0.0, md);
    for (int j = 0; j + 2 < J; ++j) {
      double d1 = ratio[j + 1] - ratio[j], d2 = ratio[j + 2] - ratio[j + 1];
      if (d1 * d2 < 0 && std::min(std::abs(d1), std::abs(d2)) >
                             0.02 * std::max(1e-300, ratio[j]))
        prof.convergence_warning = true;
    }
  }
  return prof;
}

double metric_differential(const MapSpec& map, const Eigen::Vector2d& x,
                           const Eigen::Vector2d& v,
                           const std::vector<double>& radii) {
  // a fan around v keeps the patch two-dimensional
  std::vector<Eigen::Vector2d> dirs;
  const int A = 16;
  double base = std::atan2(v.y(), v.x());
  for (int k = 0; k < A; ++k) {
    double th = base + 2.0 * M_PI * k / A;
    dirs.emplace_back(std::cos(th), std::sin(th));
  }
  auto prof = metric_differential_profile(map, x, dirs, radii);
  return prof.md[0];
}

double jacobian_of_seminorm(const std::vector<double>& samples, int n) {
  if (samples.size() < 64)
    throw std::invalid_argument("jacobian_of_seminorm: need >= 64 samples");
  for (double s : samples)
    if (s <= 0.0) return 0.0;  // integral diverges
  double integral = 0.0;
  const double dth = 2.0 * M_PI / samples.size();
  for (double s : samples) integral += std::pow(s, -n) * dth;
  double omega_n = std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
  return omega_n * n / integral;
}

std::string SurfaceMesh::to_off() const {
  std::ostringstream os;
  os << "OFF\n" << vertices.size() << " " << triangles.size() << " 0\n";
  for (const auto& v : vertices) {
    for (int i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i);
    os << "\n";
  }
  for (const auto& t : triangles)
    os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  return os.str();
}

std::string SurfaceMesh::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : vertices) {
    std::vector<double> row(v.data(), v.data() + v.size());
    vs.push_back(row);
  }
  auto& ps = j["param_coords"] = nlohmann::json::array();
  for (const auto& p : param_coords) ps.push_back({p.x(), p.y()});
  auto& ts = j["triangles"] = nlohmann::json::array();
  for (const auto& t : triangles) ts.push_back({t[0], t[1], t[2]});
  return j.dump();
}

}  // namespace qc
