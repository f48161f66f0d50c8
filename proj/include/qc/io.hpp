#ifndef QC_IO_HPP
#define QC_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qc/jets.hpp"
#include "qc/verify.hpp"

namespace qc {

// Thrown on malformed configs; carries the offending field for exit-code-2
// diagnostics.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what),
        field_name(field) {}
  std::string field_name;
};

struct RunConfig {
  ExperimentConfig experiment;
  std::string raw_json;  // canonical re-dump for hashing

  // per-command sections (defaults filled in by the parser)
  struct {
    std::string source = "left-edge";
    std::string target = "right-edge";
    double exponent = 2.0;
    double tol = 1e-3;
    bool verify_lower = false;
  } modulus;
  struct {
    int strips = 5;
    int n_min = 2;
    int n_max = 6;
    int strip_resolution = 96;
  } counterexample;
  struct {
    int points_per_axis = 6;
    int angles = 64;
  } intrinsic;
  struct {
    int paths = 100;
  } analyze;
};

RunConfig load_config(const std::string& path, std::uint64_t seed_override,
                      int resolution_override);

std::uint64_t fnv1a_hash(const std::string& s);
std::string hash_hex(std::uint64_t h);

void write_file(const std::string& path, const std::string& content);

// rows of fixed-format doubles; byte-identical across runs given the same
// numbers
std::string csv_row(const std::vector<double>& vals);

void write_distortion_csv(const std::string& path, const DistortionReport& rep);

void write_manifest(const std::string& dir, const std::string& command,
                    const std::string& config_path, std::uint64_t config_hash);

}  // namespace qc

#endif
