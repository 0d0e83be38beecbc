#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "smc/experiments/env_discovery.hpp"
#include "smc/experiments/object_discovery.hpp"
#include "smc/experiments/visual_field.hpp"

namespace smc {

enum class Experiment { envdisc, objects, retina, cluster };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

// Standalone clustering of a user-supplied matrix (rows = from).
struct ClusterConfig {
  std::string matrix;
  std::size_t k = 0;  // 0 selects the eigengap suggestion
  std::size_t k_max = 10;
  double regularization = 0.0;
};

struct RunConfig {
  Experiment experiment = Experiment::envdisc;
  std::uint64_t seed = 0;
  std::filesystem::path out = "runs";
  std::size_t jobs = 1;
  bool emit_truth = false;
  std::size_t max_cells = 200;  // heatmap crop, 0 = full matrix

  EnvDiscoveryConfig envdisc;
  ObjectDiscoveryConfig objects;
  VisualFieldConfig retina;
  ClusterConfig cluster;

  // Copies seed and jobs into the experiment configs.
  void propagate();
  std::filesystem::path run_dir() const;
};

// What the command line asked for. `report` is a command of its own.
struct Invocation {
  enum class Command { run, report, help } command = Command::run;
  RunConfig config;
  std::filesystem::path report_dir;
  bool recompute = false;
  std::string help_text;
};

// Parses argv (without the program name). Throws ConfigError with the
// offending key on unknown keys, bad values or a missing experiment.
Invocation parse_command_line(const std::vector<std::string>& args);

// Resolved config of the chosen experiment plus the common keys.
nlohmann::json config_json(const RunConfig& c);
// Inverse of config_json; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace smc
