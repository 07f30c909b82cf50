#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "beltrami/field.hpp"

namespace beltrami {

struct RunConfig {
  std::string command;  ///< check, solve-qc, solve, solve-multivalent, verify
  std::string domain = "disk";
  std::vector<double> domain_params;
  std::string domain_csv;  ///< jordan-polyline vertices
  MuProfile mu{"zero", {}, ""};
  std::string phi = "cos";
  int grid = 256;
  int samples = 256;
  double tol = 1e-10;
  double trunc = 0.0;
  int max_iter = 200;
  std::string out = "out";
  std::uint64_t seed = 1;
  bool quiet = false;
  // check
  std::vector<std::string> criteria;
  std::string orlicz = "exp:1";
  int points = 32;
  // solve / verify
  double verify_eps = 1e-2;
  int prime_ends = 64;
  std::vector<double> extra_angles;
  std::vector<double> trunc_levels;
  int csv_stride = 0;  ///< 0 = max(1, N / 256)
  bool dump_spectral = false;

  nlohmann::json to_json() const;
};

/// Builds and validates a config from JSON. Short forms: "domain": "annulus:0.5",
/// "mu": "constant:0.3"; long forms use objects {id|profile, params, csv}.
RunConfig parse_config(const nlohmann::json& j);
void validate(const RunConfig& c);

struct RunResult {
  int status = 0;
  nlohmann::json manifest;
};

/// Executes one subcommand and writes the manifest first, artifacts after.
/// Throws beltrami::Error on validation or stage failures after recording them
/// in `<out>/manifest.json` and `<out>/error.json`.
RunResult run(const RunConfig& config);

}  // namespace beltrami
