#pragma once

#include <string>
#include <vector>

#include "core/catalog.hpp"
#include "core/grid.hpp"

namespace g2k {

struct ExperimentConfig {
  std::string experiment;
  long long seed = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0 = hardware concurrency

  double gamma2_tol = 1e-6;
  double quad_tol = 1e-8;
  double bound_tol = 1e-4;

  GridKind grid_kind = GridKind::Geometric;
  double grid_lo = 1e-3;
  double grid_hi = 30.0;
  int grid_n = 24;

  // empty selection = all catalog entries of that kind
  std::vector<std::string> models, tensors, symbols, weights, polys;
  std::vector<int> sizes{4, 8, 16, 32};
  std::vector<int> growth_k{1, 2, 3};
  std::vector<int> fejer_n{2, 4, 8, 16};
  int kernel_pairs = 10;

  nlohmann::json raw;  // full config echo for the sidecar

  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct RunOutcome {
  int exit_code = 0;  // 0 ok; 2 config error (thrown instead); 3 row failures
  int rows = 0;
  int failed_rows = 0;
  std::vector<std::string> files;
};

// Runs one experiment against the catalog; rows are computed in a worker
// pool and written in configuration order. A failing row is recorded and
// the run continues.
RunOutcome run_experiment(const ExperimentConfig& cfg, const Catalog& catalog);

// Load a TOML/JSON config file, apply overrides, extend the built-in
// catalog from the config, and run. Throws Error(ParseError) on config
// problems.
RunOutcome run_from_file(const std::string& config_path,
                         const std::string& out_override = "",
                         int threads_override = -1,
                         long long seed_override = -1);

}  // namespace g2k
