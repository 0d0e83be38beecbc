#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smc/core/matrix.hpp"
#include "smc/core/transitions.hpp"

namespace smc {

// Symmetric non-negative affinity over a subset of states. index_map[i] is the
// original state id of node i; states removed as masked do not appear.
struct Affinity {
  Matrix w;
  std::vector<std::size_t> index_map;
  std::size_t n_states = 0;

  std::size_t size() const { return w.rows(); }
};

// Wraps an explicit matrix; throws ValidationError unless it is square,
// exactly symmetric and non-negative.
Affinity make_affinity(Matrix w);

// W = (T + T^T) / 2 over the observed rows of one command slice.
Affinity symmetrize(const ProbabilityMatrix& t, std::size_t cmd = 0);

struct SubgraphPartition {
  std::size_t k = 0;
  std::vector<int> labels;
  // Set when some nodes had zero degree; they carry this label (== k).
  std::optional<int> residual_label;

  std::string to_json() const;
  static SubgraphPartition from_json(const std::string& text);
  bool operator==(const SubgraphPartition&) const = default;
};

struct SpectralOptions {
  // Adds regularization * mean_degree / N to every affinity entry before the
  // embedding. Zero gives plain Ng-Jordan-Weiss.
  double regularization = 0.0;
  std::size_t kmeans_max_iter = 300;
};

// Normalized spectral clustering. Labels are indexed like the affinity nodes.
SubgraphPartition spectral_cluster(const Affinity& w, std::size_t k, std::uint64_t seed,
                                   const SpectralOptions& opts = {});

struct SpectralResult {
  SubgraphPartition partition;
  std::vector<double> eigenvalues;  // of the operator that was embedded, descending
};
SpectralResult spectral_cluster_detailed(const Affinity& w, std::size_t k, std::uint64_t seed,
                                         const SpectralOptions& opts = {});

// Affinity (T + T^T) / 2 over the nodes flagged in `keep`, from a dense square
// matrix of independent entry estimates.
Affinity symmetrize_dense(const Matrix& t, const std::vector<bool>& keep);

// Labels re-indexed by original state id. States dropped by symmetrize and
// zero-degree nodes both receive the residual label.
SubgraphPartition expand_to_states(const SubgraphPartition& p, const Affinity& w);

// Eigenvalues of D^{-1/2} W D^{-1/2} over the non-isolated nodes, descending.
std::vector<double> normalized_spectrum(const Affinity& w);

// argmax over k in [2, k_max] of lambda_k - lambda_{k+1}; the smallest k wins ties.
// Returns 2 when lambda_1 - lambda_2 is at least as wide as every such gap.
std::size_t eigengap_suggest(const Affinity& w, std::size_t k_max);
// Same rule on an already computed descending spectrum.
std::size_t eigengap_suggest(const std::vector<double>& spectrum, std::size_t k_max);

}  // namespace smc
