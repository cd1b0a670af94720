#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "gamma2kit/gamma2kit.h"

int main(int argc, char** argv) {
  CLI::App app{"gamma2kit: factorization norms of sampled Hankel kernels and "
               "semigroup functional-calculus checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = -1;
  long long seed = -1;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("config", config_path, "TOML or JSON experiment config")
      ->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_option("--seed", seed, "seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int exit_code = 0;
  const g2k_status st = g2k_run_experiment(
      config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
      threads, seed, &exit_code);
  if (st == G2K_PARSE_ERROR) {
    std::fprintf(stderr, "config error: %s\n", g2k_last_error());
    return 2;
  }
  if (st != G2K_OK) {
    std::fprintf(stderr, "error: %s\n", g2k_last_error());
    return 1;
  }
  if (exit_code == 3)
    std::fprintf(stderr, "completed with failed rows (see CSV)\n");
  return exit_code;
}
