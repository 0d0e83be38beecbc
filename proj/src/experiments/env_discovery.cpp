#include "smc/experiments/env_discovery.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "smc/clustering/eigen.hpp"
#include "smc/core/error.hpp"
#include "smc/explore/babble.hpp"

namespace smc {

namespace {

constexpr double kDegenerateLambda2 = 0.5;
constexpr std::size_t kSpectrumHead = 20;

}  // namespace

EnvDiscoveryResult run_env_discovery(const EnvDiscoveryConfig& cfg) {
  cfg.wall.validate();
  if (cfg.K == 0) throw ConfigError("envdisc.K must be >= 1");

  Rng world_rng = Rng::stream(cfg.seed, "wall-init");
  WallWorld world(cfg.wall, world_rng);
  BabbleConfig bc;
  bc.steps = cfg.steps;
  bc.policy = BabblePolicy::uniform_motor_state;
  bc.seed = cfg.seed;
  ExplorationLog log = run_babble(world, bc);

  // Sensorimotor points repeat heavily (one reading per wall state and angle),
  // so k-means runs on the distinct points weighted by their multiplicity.
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<std::size_t> point_of_sample(log.samples.size());
  std::vector<std::pair<double, double>> points;
  std::vector<double> weights;
  const double m_card = static_cast<double>(cfg.wall.n_angles);
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto& s = log.samples[i];
    const std::pair<double, double> p{s.sensory.values[0] / cfg.wall.s_max,
                                      static_cast<double>(s.motor.index) / m_card};
    auto [it, fresh] = index.try_emplace(p, points.size());
    if (fresh) {
      points.push_back(p);
      weights.push_back(0.0);
    }
    weights[it->second] += 1.0;
    point_of_sample[i] = it->second;
  }
  if (cfg.K > points.size()) {
    throw InsufficientDataError("K=" + std::to_string(cfg.K) + " exceeds the " +
                                std::to_string(points.size()) +
                                " distinct sensorimotor points observed");
  }
  Matrix pts(points.size(), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts(i, 0) = points[i].first;
    pts(i, 1) = points[i].second;
  }

  EnvDiscoveryResult r;
  r.distinct_points = points.size();
  r.n_samples = log.samples.size();
  r.n_transitions = log.transitions.size();
  r.discretization = kmeans_fit_weighted(pts, weights, cfg.K, Rng::stream(cfg.seed, "kmeans").next());
  std::vector<std::size_t> cluster_of_point = kmeans_assign_all(r.discretization, pts);
  std::vector<std::size_t> state(log.samples.size());
  for (std::size_t i = 0; i < state.size(); ++i) state[i] = cluster_of_point[point_of_sample[i]];

  r.counts = count_transitions(log, state, cfg.K);
  r.analysis = analyze_env_counts(r.counts, cfg.k_subgraphs, cfg.k_max, cfg.seed);

  std::vector<int> cl(state.size()), truth(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    cl[i] = static_cast<int>(state[i]);
    truth[i] = log.truth()[i].id;
  }
  r.cluster_truth = contingency(cl, truth);
  r.table = subgraph_table(r.cluster_truth, r.analysis.partition);
  r.ari = adjusted_rand_index(r.table);
  r.purity = purity(r.table);
  r.log = std::move(log);
  return r;
}

EnvAnalysis analyze_env_counts(const TransitionCounts& counts, std::size_t k_subgraphs,
                               std::size_t k_max, std::uint64_t seed) {
  EnvAnalysis a;
  a.transitions = normalize(counts);
  Affinity w = symmetrize(a.transitions);

  auto spectrum = normalized_spectrum(w);
  a.spectrum_head.assign(spectrum.begin(),
                         spectrum.begin() + static_cast<long>(std::min(kSpectrumHead, spectrum.size())));
  a.degenerate = spectrum.size() < 2 || spectrum[1] < kDegenerateLambda2;
  const std::size_t k_top = std::min(k_max, spectrum.size() > 0 ? spectrum.size() - 1 : 0);
  a.eigengap_k = k_top >= 2 ? eigengap_suggest(spectrum, k_top) : 2;
  a.k_used = k_subgraphs ? k_subgraphs : a.eigengap_k;

  SubgraphPartition local = spectral_cluster(w, a.k_used, Rng::stream(seed, "spectral").next());
  a.partition = expand_to_states(local, w);
  return a;
}

Contingency subgraph_table(const Contingency& cluster_truth, const SubgraphPartition& p) {
  std::map<int, std::vector<long>> rows;
  for (std::size_t r = 0; r < cluster_truth.row_ids.size(); ++r) {
    const int c = cluster_truth.row_ids[r];
    if (c < 0 || static_cast<std::size_t>(c) >= p.labels.size()) {
      throw ShapeError("cluster id " + std::to_string(c) + " outside the partition");
    }
    auto& row = rows[p.labels[static_cast<std::size_t>(c)]];
    row.resize(cluster_truth.col_ids.size(), 0);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += cluster_truth.table[r][j];
  }
  Contingency out;
  out.col_ids = cluster_truth.col_ids;
  for (auto& [label, row] : rows) {
    out.row_ids.push_back(label);
    out.table.push_back(std::move(row));
  }
  return out;
}

}  // namespace smc
