#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "smc/cli/config.hpp"

namespace smc {

// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // I/O trouble or a failed recompute check
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Runs one experiment and writes its directory. Returns the directory.
std::filesystem::path run_experiment(const RunConfig& c, std::ostream& log);

struct RecomputeCheck {
  std::string name;
  bool ok = false;
};

// Rebuilds metrics and partition of a run directory from its saved matrices.
std::vector<RecomputeCheck> recompute_run(const std::filesystem::path& dir);

// Whole command line: parse, dispatch, map errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smc
