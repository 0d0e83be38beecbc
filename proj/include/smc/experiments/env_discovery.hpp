#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smc/clustering/kmeans.hpp"
#include "smc/clustering/spectral.hpp"
#include "smc/core/transitions.hpp"
#include "smc/explore/babble.hpp"
#include "smc/experiments/metrics.hpp"
#include "smc/worlds/wall_world.hpp"

namespace smc {

struct EnvDiscoveryConfig {
  WallWorldConfig wall;
  std::size_t K = 430;
  std::size_t k_subgraphs = 15;  // 0 selects the eigengap suggestion
  std::size_t k_max = 20;        // upper end of the eigengap search
  std::size_t steps = 200000;
  std::uint64_t seed = 0;
};

// Everything downstream of the transition counts; reproducible from them alone.
struct EnvAnalysis {
  ProbabilityMatrix transitions;
  SubgraphPartition partition;  // one label per cluster state
  std::size_t k_used = 0;
  std::size_t eigengap_k = 0;
  std::vector<double> spectrum_head;
  // The leading subdominant eigenvalue is small: the transition graph is one
  // well-mixed blob with nothing external to discover.
  bool degenerate = false;
};

EnvAnalysis analyze_env_counts(const TransitionCounts& counts, std::size_t k_subgraphs,
                               std::size_t k_max, std::uint64_t seed);

// Merges the rows of a cluster x truth table into subgraph x truth.
Contingency subgraph_table(const Contingency& cluster_truth, const SubgraphPartition& p);

struct EnvDiscoveryResult {
  ExplorationLog log;
  ClusterModel discretization;
  std::size_t distinct_points = 0;
  TransitionCounts counts;
  EnvAnalysis analysis;
  Contingency cluster_truth;  // cluster x hidden environment state, over samples
  Contingency table;          // subgraph label x hidden environment state
  double ari = 0.0;
  double purity = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_transitions = 0;
};

// Motor babbling on the wall world, k-means discretization of the normalized
// (reading, motor) plane, transition counting, spectral clustering of the
// symmetrized transition matrix, and sample-level scoring against the hidden
// wall position.
EnvDiscoveryResult run_env_discovery(const EnvDiscoveryConfig& cfg);

}  // namespace smc
