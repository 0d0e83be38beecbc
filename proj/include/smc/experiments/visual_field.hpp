#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smc/clustering/kmeans.hpp"
#include "smc/core/transitions.hpp"
#include "smc/experiments/metrics.hpp"
#include "smc/worlds/retina_world.hpp"

namespace smc {

struct VisualFieldConfig {
  RetinaWorldConfig retina;
  std::size_t n_scenes = 100;
  std::size_t steps_per_scene = 2000;
  std::size_t K = 10;
  std::size_t trial_threshold = 50;  // evidence needed before an entry counts as "high"
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

// Entry above 0.5 backed by at least trial_threshold trials.
struct HighEntry {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t cmd = 0;
  double p = 0.0;
  std::uint64_t trials = 0;
  bool on_diagonal = false;
};

// Everything downstream of the transition counts.
struct VisualAnalysis {
  ProbabilityMatrix transitions;  // normalized per target field
  std::vector<FieldPairs> tables;
  std::vector<DominanceStats> dominance;
  std::vector<HighEntry> high_entries;
  bool rows_dominate = false;
};

VisualAnalysis analyze_visual_counts(const TransitionCounts& counts, const RetinaWorldConfig& retina,
                                     std::size_t k, std::size_t trial_threshold);

struct VisualFieldResult {
  ClusterModel patches;  // shared by all four receptive fields
  std::size_t distinct_patches = 0;
  TransitionCounts counts;  // (field, cluster) x (field, cluster) x saccade
  VisualAnalysis analysis;
  std::size_t n_transitions = 0;
  std::size_t n_clamped = 0;
};

// Random saccades over random scenes; one k-means model over all receptive
// field patches; per-saccade transition tensor between (field, cluster) states.
VisualFieldResult run_visual_field(const VisualFieldConfig& cfg);

// Number of (from, cmd) pairs of the target field group containing `to`.
std::uint64_t group_trials(const TransitionCounts& counts, std::size_t from, std::size_t to,
                           std::size_t cmd, std::size_t group_size);

// Every on-diagonal entry with enough trials beats every off-diagonal entry of its row.
bool diagonal_rows_dominate(const TransitionCounts& counts, const VisualAnalysis& a, std::size_t k,
                            std::size_t trial_threshold);

}  // namespace smc
