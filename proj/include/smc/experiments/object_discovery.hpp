#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "smc/clustering/spectral.hpp"
#include "smc/core/matrix.hpp"
#include "smc/experiments/metrics.hpp"
#include "smc/worlds/grid_world.hpp"

namespace smc {

struct ObjectDiscoveryConfig {
  GridWorldConfig grid;
  std::size_t n_scenes = 200;  // including the initial scene
  std::size_t steps_per_scene = 5000;
  std::size_t initial_steps = 200000;
  std::size_t min_trials = 5;
  std::size_t k_subgraphs = 4;
  double salient_fraction = 0.10;
  std::size_t tau_samples = 100000;
  // Stored transitions link two salient experiences of the first scene that
  // are at most link_horizon steps apart and whose net motor displacement is
  // within link_radius elements on both axes.
  long link_radius = 15;
  std::size_t link_horizon = 800;
  double regularization = 0.01;  // see SpectralOptions
  bool overlap = true;          // objects may overlap in later scenes
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  void validate() const;
};

// A transition (S_from, dM -> S_to) stored from the first scene.
struct StoredLink {
  std::size_t from = 0;
  std::size_t to = 0;
  long dx = 0;
  long dy = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

// Truth class of a stored state in the first scene: object id >= 0, or one of
// these two negative codes.
constexpr int kTruthBackground = -1;
constexpr int kTruthMixed = -2;

struct SubgraphSummary {
  int label = 0;
  std::size_t size = 0;
  // Mean over entries inside the subgraph with at least min_trials trials.
  double mean_probability = 0.0;
  std::size_t observed_entries = 0;
  // Same over every entry tried at least once; defined for masked states too.
  double mean_tried_probability = 0.0;
  std::size_t tried_entries = 0;
};

struct ObjectMatch {
  int object = 0;
  int label = -1;
  double purity = 0.0;
  double coverage = 0.0;
};

// Steps 4-5 and the subgraph scores, reproducible from the stored links.
struct ObjectAnalysis {
  Matrix probabilities;                      // n_states x n_states
  std::vector<bool> observed;                // n_states^2, row-major
  std::vector<std::uint64_t> pair_trials;    // n_states^2, row-major
  std::vector<std::uint64_t> pair_successes;
  std::size_t observed_links = 0;
  SubgraphPartition partition;  // one label per stored state
  std::vector<double> eigenvalues;
  std::size_t eigengap_k = 0;
  std::vector<SubgraphSummary> subgraphs;
};

ObjectAnalysis analyze_object_links(std::size_t n_states, const std::vector<StoredLink>& links,
                                    std::size_t min_trials, std::size_t k_subgraphs,
                                    double regularization, std::uint64_t seed);

struct ObjectDiscoveryResult {
  double tau = 0.0;
  std::size_t n_states = 0;
  std::vector<std::array<int, 9>> states;  // salient dictionary, thousandths
  std::vector<int> state_truth;            // evaluation only
  std::vector<StoredLink> links;
  std::size_t background_changes = 0;      // elements redrawn over all scenes
  ObjectAnalysis analysis;
  Contingency table;  // subgraph label x truth class, over stored states
  std::vector<ObjectMatch> matches;
};

ObjectDiscoveryResult run_object_discovery(const ObjectDiscoveryConfig& cfg);

// Scores a partition of the stored states from per-pair trial counts
// (row-major, n x n): per-subgraph mean probabilities.
std::vector<SubgraphSummary> summarize_subgraphs(const SubgraphPartition& p,
                                                 const std::vector<std::uint64_t>& trials,
                                                 const std::vector<std::uint64_t>& successes,
                                                 std::size_t min_trials);
// For each object, the subgraph holding most of its states.
std::vector<ObjectMatch> match_objects(const Contingency& table);

}  // namespace smc
