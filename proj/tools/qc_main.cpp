// Command-line front end: runs the distortion, modulus, counterexample and
// intrinsic-metric experiments from a JSON config and writes plot-ready
// CSV plus per-check JSON into a run directory named by the config hash.
//
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qc/io.hpp"
#include "qc/modulus.hpp"

namespace fs = std::filesystem;
using namespace qc;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "runs";
  std::uint64_t seed = 0;
  int resolution = 0;
  bool force = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config path")
      ->required();
  cmd->add_option("--out", args.out_dir, "output base directory");
  cmd->add_option("--seed", args.seed, "override config seed");
  cmd->add_option("--resolution", args.resolution, "override grid resolution");
  cmd->add_flag("--force", args.force, "reuse an existing run directory");
}

// Returns the run directory; throws ConfigError on a directory clash.
std::string prepare_run_dir(const CommonArgs& args, const std::string& command,
                            const RunConfig& rc, std::uint64_t& hash_out) {
  hash_out = fnv1a_hash(command + ":" + rc.raw_json);
  fs::path dir = fs::path(args.out_dir) / (command + "-" + hash_hex(hash_out));
  if (fs::exists(dir) && !args.force)
    throw ConfigError("--out",
                      "run directory " + dir.string() +
                          " exists (same config hash); pass --force to reuse");
  fs::create_directories(dir);
  return dir.string();
}

int finish(const std::string& dir, const std::vector<CheckResult>& checks) {
  bool all_pass = true;
  for (const auto& c : checks) {
    write_file(dir + "/" + c.name + ".check.json", c.to_json());
    std::cout << (c.pass ? "[pass] " : (c.inconclusive ? "[????] " : "[FAIL] "))
              << c.name << "  lhs=" << c.lhs << " rhs=" << c.rhs << "  "
              << c.note << "\n";
    if (!c.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}

int cmd_analyze(const CommonArgs& args) {
  RunConfig rc = load_config(args.config_path, args.seed, args.resolution);
  std::uint64_t hash;
  std::string dir = prepare_run_dir(args, "analyze", rc, hash);
  write_manifest(dir, "analyze", args.config_path, hash);

  auto rep = distortion_scan(rc.experiment.map, rc.experiment.form,
                             rc.experiment.grid);
  write_distortion_csv(dir + "/distortion.csv", rep);
  std::cout << "essSupK=" << rep.ess_sup_K << " p999=" << rep.p999_K
            << " degenerate=" << rep.degenerate_points.size() << "\n";

  std::vector<CheckResult> checks;
  checks.push_back(check_analytic_definition(rc.experiment));
  checks.push_back(check_upper_gradient(rc.experiment, rc.analyze.paths));
  return finish(dir, checks);
}

int cmd_modulus(const CommonArgs& args) {
  RunConfig rc = load_config(args.config_path, args.seed, args.resolution);
  std::uint64_t hash;
  std::string dir = prepare_run_dir(args, "modulus", rc, hash);
  write_manifest(dir, "modulus", args.config_path, hash);

  const auto& grid = rc.experiment.grid;
  PathFamily family{select_boundary(grid, rc.modulus.source),
                    select_boundary(grid, rc.modulus.target)};
  auto graph = build_grid_graph(grid);
  auto result =
      discrete_modulus(graph, family, rc.modulus.exponent, rc.modulus.tol);

  std::string body = "cell,rho\n";
  for (size_t c = 0; c < result.density.values.size(); ++c)
    body += csv_row({static_cast<double>(c), result.density.values[c]});
  write_file(dir + "/density.csv", body);

  std::ostringstream os;
  os << "{\n  \"modulus\": " << result.modulus
     << ",\n  \"iterations\": " << result.iterations
     << ",\n  \"certificate\": " << result.certificate
     << ",\n  \"active_paths\": " << result.active_paths << "\n}\n";
  write_file(dir + "/modulus.json", os.str());
  std::cout << "modulus=" << result.modulus
            << " certificate=" << result.certificate
            << " iterations=" << result.iterations << "\n";

  std::vector<CheckResult> checks;
  if (rc.modulus.verify_lower) {
    auto rep = verify_lower_modulus(rc.experiment.map, rc.experiment.form,
                                    grid, family,
                                    rc.experiment.tol("lower_modulus", 0.05));
    CheckResult cr;
    cr.name = "lower-modulus";
    cr.lhs = rep.mod_domain;
    cr.rhs = rep.K_emp * rep.mod_image;
    cr.tolerance = rc.experiment.tol("lower_modulus", 0.05);
    cr.pass = rep.pass;
    std::ostringstream note;
    note << "mod=" << rep.mod_domain << " K_emp=" << rep.K_emp
         << " mod_image=" << rep.mod_image;
    cr.note = note.str();
    checks.push_back(cr);
  }
  return finish(dir, checks);
}

int cmd_counterexample(const CommonArgs& args) {
  RunConfig rc = load_config(args.config_path, args.seed, args.resolution);
  if (rc.experiment.map.kind != MapKind::Counterexample)
    throw ConfigError("map.kind", "counterexample command needs the "
                                  "counterexample map");
  std::uint64_t hash;
  std::string dir = prepare_run_dir(args, "counterexample", rc, hash);
  write_manifest(dir, "counterexample", args.config_path, hash);

  std::vector<CheckResult> checks;
  RegularityGrowth growth;
  checks.push_back(check_counterexample_regularity(
      rc.experiment, rc.counterexample.strips,
      rc.counterexample.strip_resolution, &growth));
  std::string body = "N,measure\n";
  for (size_t k = 0; k < growth.cumulative.size(); ++k)
    body += csv_row({static_cast<double>(k + 1), growth.cumulative[k]});
  write_file(dir + "/regularity-growth.csv", body);

  LlcSeries series;
  checks.push_back(check_counterexample_llc(
      rc.experiment, rc.counterexample.n_min, rc.counterexample.n_max,
      &series));
  body = "n,c,unbounded\n";
  for (size_t k = 0; k < series.n.size(); ++k)
    body += csv_row({static_cast<double>(series.n[k]), series.c[k],
                     series.unbounded[k] ? 1.0 : 0.0});
  write_file(dir + "/llc-constants.csv", body);

  checks.push_back(
      check_metric_definition(rc.experiment, {2e-3, 1e-3, 5e-4}));
  return finish(dir, checks);
}

int cmd_intrinsic(const CommonArgs& args) {
  RunConfig rc = load_config(args.config_path, args.seed, args.resolution);
  std::uint64_t hash;
  std::string dir = prepare_run_dir(args, "intrinsic", rc, hash);
  write_manifest(dir, "intrinsic", args.config_path, hash);

  std::vector<CheckResult> checks;
  checks.push_back(check_measure_equality(rc.experiment, rc.experiment.grid,
                                          rc.intrinsic.points_per_axis,
                                          rc.intrinsic.angles));

  // md versus |Df v| sample table
  const auto& box = rc.experiment.grid.box;
  std::string body = "x1,x2,v1,v2,md,dfv\n";
  double r0 = 0.05 * std::min(box.width(), box.height());
  std::vector<double> radii = {r0, 0.5 * r0};
  std::vector<double> rel_errors;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Eigen::Vector2d x(box.lo.x() + (a + 0.5) / 3.0 * box.width(),
                        box.lo.y() + (b + 0.5) / 3.0 * box.height());
      std::vector<Eigen::Vector2d> dirs;
      for (int k = 0; k < 16; ++k) {
        double th = 2.0 * M_PI * k / 16;
        dirs.emplace_back(std::cos(th), std::sin(th));
      }
      auto prof = metric_differential_profile(rc.experiment.map, x, dirs, radii);
      Eigen::MatrixXd Df = differential(rc.experiment.map, x).Df;
      for (int k = 0; k < 16; ++k) {
        double dfv = (Df * dirs[k]).norm();
        body += csv_row({x.x(), x.y(), dirs[k].x(), dirs[k].y(), prof.md[k],
                         dfv});
        if (dfv > 0) rel_errors.push_back(std::abs(prof.md[k] - dfv) / dfv);
      }
    }
  write_file(dir + "/metric-differential.csv", body);

  std::sort(rel_errors.begin(), rel_errors.end());
  CheckResult md_check;
  md_check.name = "metric-differential";
  md_check.tolerance = rc.experiment.tol("metric_differential", 0.02);
  md_check.lhs = rel_errors[rel_errors.size() / 2];  // median
  md_check.rhs = md_check.tolerance;
  md_check.pass = md_check.lhs < md_check.tolerance;
  md_check.note = "median relative error of md vs |Df v|";
  checks.push_back(md_check);
  return finish(dir, checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasiconformal-curve numerical laboratory"};
  app.require_subcommand(1);
  CommonArgs args;
  auto* analyze = app.add_subcommand("analyze", "distortion scan + checks");
  auto* modulus = app.add_subcommand("modulus", "discrete modulus solver");
  auto* counter = app.add_subcommand("counterexample",
                                     "regularity / llc / metric checks");
  auto* intrinsic = app.add_subcommand("intrinsic", "intrinsic-metric checks");
  for (auto* c : {analyze, modulus, counter, intrinsic}) add_common(c, args);

  try {
    app.parse(argc, argv);
    if (analyze->parsed()) return cmd_analyze(args);
    if (modulus->parsed()) return cmd_modulus(args);
    if (counter->parsed()) return cmd_counterexample(args);
    if (intrinsic->parsed()) return cmd_intrinsic(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
