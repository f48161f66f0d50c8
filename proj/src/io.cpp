#include "qc/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qc {

namespace {

using nlohmann::json;

Box2 parse_box(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
    throw ConfigError(field, "expected [[lo1,lo2],[hi1,hi2]]");
  Box2 b;
  b.lo = {j[0][0].get<double>(), j[0][1].get<double>()};
  b.hi = {j[1][0].get<double>(), j[1][1].get<double>()};
  if (!(b.lo.x() < b.hi.x() && b.lo.y() < b.hi.y()))
    throw ConfigError(field, "degenerate box");
  return b;
}

MapSpec parse_map(const json& j) {
  if (!j.contains("kind")) throw ConfigError("map.kind", "missing");
  std::string kind = j.at("kind").get<std::string>();
  Box2 d = parse_box(j.value("domain", json::array({{0, 0}, {1, 1}})),
                     "map.domain");
  if (kind == "identity") return MapSpec::identity(d);
  if (kind == "exp-plane") return MapSpec::exp_plane(d);
  if (kind == "cylinder") return MapSpec::cylinder(d);
  if (kind == "counterexample") {
    double a = j.value("a", 1.0 / (40.0 * M_E));
    try {
      return MapSpec::counterexample(d, a);
    } catch (const std::exception& e) {
      throw ConfigError("map.a", e.what());
    }
  }
  if (kind == "linear") {
    if (!j.contains("matrix")) throw ConfigError("map.matrix", "missing");
    auto rows = j.at("matrix");
    Eigen::MatrixXd M(rows.size(), 2);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != 2)
        throw ConfigError("map.matrix", "rows must have 2 entries (n = 2)");
      M(r, 0) = rows[r][0].get<double>();
      M(r, 1) = rows[r][1].get<double>();
    }
    return MapSpec::linear(M, d);
  }
  if (kind == "graph") {
    if (!j.contains("height")) throw ConfigError("map.height", "missing");
    try {
      return MapSpec::graph(j.at("height").get<std::string>(), d);
    } catch (const std::exception& e) {
      throw ConfigError("map.height", e.what());
    }
  }
  if (kind == "user") {
    if (!j.contains("components"))
      throw ConfigError("map.components", "missing");
    try {
      return MapSpec::user(j.at("components").get<std::vector<std::string>>(),
                           d);
    } catch (const std::exception& e) {
      throw ConfigError("map.components", e.what());
    }
  }
  throw ConfigError("map.kind", "unknown kind '" + kind + "'");
}

ConstantForm parse_form(const json& j, int map_m) {
  int n = j.value("n", 2);
  int m = j.value("m", map_m);
  std::vector<std::pair<MultiIndex, double>> cs;
  for (const auto& e : j.value("coeffs", json::array()))
    cs.emplace_back(MultiIndex(e.at("I").get<std::vector<int>>()),
                    e.at("c").get<double>());
  if (cs.empty() && n == 2)
    cs.emplace_back(MultiIndex({1, 2}), 1.0);  // default omega = dx1 ^ dx2
  if (n > m) throw ConfigError("form.n", "n > m violates the form invariant");
  try {
    return ConstantForm(n, m, std::move(cs));
  } catch (const std::exception& e) {
    throw ConfigError("form.coeffs", e.what());
  }
}

GridDomain parse_grid(const json& j, const Box2& domain, int res_override) {
  int nx = 64, ny = 64;
  if (j.contains("resolution")) {
    auto r = j.at("resolution");
    if (r.is_number()) {
      nx = ny = r.get<int>();
    } else if (r.is_array() && r.size() == 2) {
      nx = r[0].get<int>();
      ny = r[1].get<int>();
    } else {
      throw ConfigError("grid.resolution", "expected int or [nx,ny]");
    }
  }
  if (res_override > 0) nx = ny = res_override;
  Box2 box = j.contains("box") ? parse_box(j.at("box"), "grid.box") : domain;
  std::function<bool(const Eigen::Vector2d&)> mask;
  if (j.contains("mask")) {
    auto mk = j.at("mask");
    if (mk.contains("annulus")) {
      double r0 = mk.at("annulus")[0].get<double>();
      double r1 = mk.at("annulus")[1].get<double>();
      mask = annulus_mask(r0, r1);
    } else {
      throw ConfigError("grid.mask", "only {\"annulus\":[r0,r1]} supported");
    }
  }
  try {
    return GridDomain(box, nx, ny, mask);
  } catch (const std::exception& e) {
    throw ConfigError("grid.resolution", e.what());
  }
}

}  // namespace

RunConfig load_config(const std::string& path, std::uint64_t seed_override,
                      int resolution_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("parse error: ") + e.what());
  }

  RunConfig rc;
  if (!j.contains("map")) throw ConfigError("map", "missing");
  rc.experiment.map = parse_map(j.at("map"));
  rc.experiment.form =
      parse_form(j.value("form", json::object()), rc.experiment.map.m);
  rc.experiment.grid = parse_grid(j.value("grid", json::object()),
                                  rc.experiment.map.domain,
                                  resolution_override);
  rc.experiment.seed = j.value("seed", std::uint64_t{1});
  if (seed_override) rc.experiment.seed = seed_override;
  for (auto& [k, v] : j.value("tolerances", json::object()).items())
    rc.experiment.tolerances[k] = v.get<double>();

  if (j.contains("modulus")) {
    auto& m = j.at("modulus");
    rc.modulus.source = m.value("source", rc.modulus.source);
    rc.modulus.target = m.value("target", rc.modulus.target);
    rc.modulus.exponent = m.value("exponent", rc.modulus.exponent);
    rc.modulus.tol = m.value("tol", rc.modulus.tol);
    rc.modulus.verify_lower = m.value("verify_lower", false);
  }
  if (j.contains("counterexample")) {
    auto& c = j.at("counterexample");
    rc.counterexample.strips = c.value("strips", rc.counterexample.strips);
    rc.counterexample.n_min = c.value("n_min", rc.counterexample.n_min);
    rc.counterexample.n_max = c.value("n_max", rc.counterexample.n_max);
    rc.counterexample.strip_resolution =
        c.value("strip_resolution", rc.counterexample.strip_resolution);
  }
  if (j.contains("intrinsic")) {
    auto& c = j.at("intrinsic");
    rc.intrinsic.points_per_axis =
        c.value("points_per_axis", rc.intrinsic.points_per_axis);
    rc.intrinsic.angles = c.value("angles", rc.intrinsic.angles);
  }
  if (j.contains("analyze"))
    rc.analyze.paths = j.at("analyze").value("paths", rc.analyze.paths);

  json canon = j;
  canon["seed"] = rc.experiment.seed;
  if (resolution_override > 0) canon["resolution_override"] = resolution_override;
  rc.raw_json = canon.dump();
  return rc;
}

std::uint64_t fnv1a_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string csv_row(const std::vector<double>& vals) {
  std::string row;
  char buf[40];
  for (size_t i = 0; i < vals.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", vals[i]);
    if (i) row += ",";
    row += buf;
  }
  row += "\n";
  return row;
}

void write_distortion_csv(const std::string& path,
                          const DistortionReport& rep) {
  std::string body = "x1,x2,K,starPullback,opNorm,cbJac\n";
  for (const auto& s : rep.samples)
    body += csv_row({s.x.x(), s.x.y(), s.K, s.star, s.op_norm, s.cb_jac});
  write_file(path, body);
}

void write_manifest(const std::string& dir, const std::string& command,
                    const std::string& config_path,
                    std::uint64_t config_hash) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config_path;
  j["output_dir"] = dir;
  j["config_hash"] = hash_hex(config_hash);
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["timestamp"] = buf;
  write_file(dir + "/run-manifest.json", j.dump(2));
}

}  // namespace qc
