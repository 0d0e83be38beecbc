#include "smc/experiments/object_discovery.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "smc/core/error.hpp"
#include "smc/core/parallel.hpp"
#include "smc/explore/babble.hpp"

namespace smc {

namespace {

using Key = std::array<int, 9>;
constexpr long kNone = -1;

// Per-step view of one walk: dictionary id of the sensed state (or -1) and
// the motor position, which is all the learner looks at.
struct Walk {
  std::vector<long> id;
  std::vector<Cell> pos;
  std::vector<HiddenLabel> truth;  // evaluation only
  std::vector<Key> keys;
};

Walk record_walk(const GridWorldConfig& cfg, std::shared_ptr<const GridScene> scene,
                 std::size_t steps, std::uint64_t seed, int episode, bool keep_truth) {
  Rng start_rng = Rng::stream(seed, "start");
  GridWorld world(cfg, std::move(scene), grid_random_position(cfg, start_rng));
  BabbleConfig bc;
  bc.steps = steps;
  bc.policy = BabblePolicy::uniform_motor_delta;
  bc.seed = seed;
  bc.episode = episode;
  ExplorationLog log = run_babble(world, bc);
  Walk w;
  w.pos.reserve(steps);
  w.keys.reserve(steps);
  for (const auto& s : log.samples) {
    w.pos.push_back({static_cast<long>(s.motor.index % cfg.width),
                     static_cast<long>(s.motor.index / cfg.width)});
    Key k{};
    for (std::size_t i = 0; i < 9; ++i) {
      k[i] = static_cast<int>(s.sensory.values[i] * 1000.0 + 0.5);
    }
    w.keys.push_back(k);
  }
  if (keep_truth) w.truth = log.truth();
  return w;
}

long displacement(long a, long b, std::size_t n, bool torus) {
  long d = b - a;
  if (!torus) return d;
  const long m = static_cast<long>(n);
  d = ((d % m) + m) % m;
  if (d > m / 2) d -= m;
  return d;
}

struct LinkTable {
  long radius = 0;
  long side = 0;
  std::vector<long> slot;  // state * side^2 + offset -> link index or -1

  LinkTable(std::size_t n_states, long r) : radius(r), side(2 * r + 1) {
    slot.assign(n_states * static_cast<std::size_t>(side * side), kNone);
  }
  long& at(std::size_t state, long dx, long dy) {
    return slot[state * static_cast<std::size_t>(side * side) +
                static_cast<std::size_t>((dy + radius) * side + (dx + radius))];
  }
};

int truth_class(const HiddenLabel& h) {
  if (h.kind == LabelKind::object_id) return h.id;
  if (h.kind == LabelKind::background) return kTruthBackground;
  return kTruthMixed;
}

}  // namespace

void ObjectDiscoveryConfig::validate() const {
  grid.validate();
  if (n_scenes == 0) throw ConfigError("objects.n_scenes must be >= 1");
  if (steps_per_scene < 2 || initial_steps < 2) throw ConfigError("walks need at least 2 steps");
  if (k_subgraphs < 2) throw ConfigError("objects.k_subgraphs must be >= 2");
  if (!(salient_fraction > 0.0 && salient_fraction < 1.0)) {
    throw ConfigError("objects.salient_fraction must be in (0, 1)");
  }
  if (link_radius < 1) throw ConfigError("objects.link_radius must be >= 1");
  if (link_horizon < 1) throw ConfigError("objects.link_horizon must be >= 1");
  if (regularization < 0.0) throw ConfigError("objects.regularization must be >= 0");
  if (min_trials < 1) throw ConfigError("objects.min_trials must be >= 1");
}

std::vector<SubgraphSummary> summarize_subgraphs(const SubgraphPartition& p,
                                                 const std::vector<std::uint64_t>& trials,
                                                 const std::vector<std::uint64_t>& successes,
                                                 std::size_t min_trials) {
  const std::size_t n = p.labels.size();
  if (trials.size() != n * n || successes.size() != n * n) {
    throw ShapeError("partition/trial table mismatch");
  }
  const int n_labels = static_cast<int>(p.k) + (p.residual_label ? 1 : 0);
  std::vector<SubgraphSummary> out(static_cast<std::size_t>(n_labels));
  std::vector<double> sum(out.size(), 0.0), sum_tried(out.size(), 0.0);
  for (int l = 0; l < n_labels; ++l) out[static_cast<std::size_t>(l)].label = l;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.labels[i] < 0 || p.labels[i] >= n_labels) throw ValidationError("label out of range");
    const auto li = static_cast<std::size_t>(p.labels[i]);
    ++out[li].size;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t tr = trials[i * n + j];
      if (tr == 0 || p.labels[j] != p.labels[i]) continue;
      const double prob = static_cast<double>(successes[i * n + j]) / static_cast<double>(tr);
      sum_tried[li] += prob;
      ++out[li].tried_entries;
      if (tr < min_trials) continue;
      sum[li] += prob;
      ++out[li].observed_entries;
    }
  }
  for (std::size_t l = 0; l < out.size(); ++l) {
    if (out[l].observed_entries) out[l].mean_probability = sum[l] / static_cast<double>(out[l].observed_entries);
    if (out[l].tried_entries) {
      out[l].mean_tried_probability = sum_tried[l] / static_cast<double>(out[l].tried_entries);
    }
  }
  return out;
}

std::vector<ObjectMatch> match_objects(const Contingency& table) {
  std::vector<ObjectMatch> out;
  for (std::size_t c = 0; c < table.col_ids.size(); ++c) {
    if (table.col_ids[c] < 0) continue;
    long col_total = 0, best = -1;
    std::size_t best_row = 0;
    for (std::size_t r = 0; r < table.row_ids.size(); ++r) {
      col_total += table.table[r][c];
      if (table.table[r][c] > best) {
        best = table.table[r][c];
        best_row = r;
      }
    }
    long row_total = 0;
    for (long v : table.table[best_row]) row_total += v;
    ObjectMatch m;
    m.object = table.col_ids[c];
    m.label = table.row_ids[best_row];
    m.purity = static_cast<double>(best) / static_cast<double>(row_total);
    m.coverage = static_cast<double>(best) / static_cast<double>(col_total);
    out.push_back(m);
  }
  return out;
}

ObjectDiscoveryResult run_object_discovery(const ObjectDiscoveryConfig& cfg) {
  cfg.validate();
  const GridWorldConfig& g = cfg.grid;
  ObjectDiscoveryResult r;

  Rng object_rng = Rng::stream(cfg.seed, "grid-objects");
  const auto objects = grid_draw_objects(g, object_rng);

  // Backgrounds evolve scene to scene, so they are drawn in order up front.
  std::vector<std::shared_ptr<const MilliPatch>> backgrounds(cfg.n_scenes);
  {
    Rng bg_rng = Rng::stream(cfg.seed, "grid-background", 0);
    MilliPatch bg = grid_draw_background(g, bg_rng);
    backgrounds[0] = std::make_shared<const MilliPatch>(bg);
    for (std::size_t s = 1; s < cfg.n_scenes; ++s) {
      Rng change_rng = Rng::stream(cfg.seed, "grid-background", s);
      const std::size_t changed = grid_change_background(g, bg, change_rng);
      r.background_changes += changed;
      backgrounds[s] = changed ? std::make_shared<const MilliPatch>(bg) : backgrounds[s - 1];
    }
  }
  auto make_scene = [&](std::size_t s) {
    Rng place_rng = Rng::stream(cfg.seed, "grid-placement", s);
    auto pos = grid_place_objects(g, objects.size(), place_rng, s == 0 || !cfg.overlap);
    return std::make_shared<const GridScene>(grid_paint(g, *backgrounds[s], objects, pos));
  };

  // Step 1: first scene, salient dictionary and stored transitions.
  auto first = make_scene(0);
  {
    Rng tau_rng = Rng::stream(cfg.seed, "grid-tau");
    r.tau = grid_calibrate_tau(g, *first, tau_rng, cfg.tau_samples, cfg.salient_fraction);
  }
  Walk w0 = record_walk(g, first, cfg.initial_steps, Rng::stream(cfg.seed, "grid-walk", 0).next(), 0, true);
  std::map<Key, std::size_t> dict;
  std::vector<int> truth_of_state;
  w0.id.assign(w0.keys.size(), kNone);
  for (std::size_t t = 0; t < w0.keys.size(); ++t) {
    const Key& k = w0.keys[t];
    const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
    // Same comparison as grid_salient, on the quantized doubles.
    if (static_cast<double>(*hi) / 1000.0 - static_cast<double>(*lo) / 1000.0 < r.tau) continue;
    auto [it, fresh] = dict.try_emplace(k, r.states.size());
    if (fresh) {
      r.states.push_back(k);
      truth_of_state.push_back(truth_class(w0.truth[t]));
    }
    w0.id[t] = static_cast<long>(it->second);
  }
  r.n_states = r.states.size();
  if (r.n_states == 0) throw InsufficientDataError("no salient state met during the first scene");

  LinkTable table(r.n_states, cfg.link_radius);
  const long rad = cfg.link_radius;
  for (std::size_t t = 0; t < w0.id.size(); ++t) {
    if (w0.id[t] == kNone) continue;
    const auto from = static_cast<std::size_t>(w0.id[t]);
    for (std::size_t u = t + 1; u <= std::min(t + cfg.link_horizon, w0.id.size() - 1); ++u) {
      if (w0.id[u] == kNone) continue;
      const long dx = displacement(w0.pos[t].x, w0.pos[u].x, g.width, g.toroidal);
      const long dy = displacement(w0.pos[t].y, w0.pos[u].y, g.height, g.toroidal);
      if (std::abs(dx) > rad || std::abs(dy) > rad || (dx == 0 && dy == 0)) continue;
      long& slot = table.at(from, dx, dy);
      if (slot != kNone) continue;
      slot = static_cast<long>(r.links.size());
      r.links.push_back({from, static_cast<std::size_t>(w0.id[u]), dx, dy, 0, 0});
    }
  }

  // Steps 2-3: later scenes, passive trial counting.
  struct Tally {
    std::vector<std::uint64_t> trials, successes;
  };
  std::vector<Tally> tallies(cfg.n_scenes > 0 ? cfg.n_scenes - 1 : 0);
  parallel_for(tallies.size(), cfg.jobs, [&](std::size_t i) {
    const std::size_t s = i + 1;
    Walk w = record_walk(g, make_scene(s), cfg.steps_per_scene,
                         Rng::stream(cfg.seed, "grid-walk", s).next(), static_cast<int>(s), false);
    Tally& tl = tallies[i];
    tl.trials.assign(r.links.size(), 0);
    tl.successes.assign(r.links.size(), 0);
    std::vector<long> id(w.keys.size(), kNone);
    for (std::size_t t = 0; t < w.keys.size(); ++t) {
      auto it = dict.find(w.keys[t]);
      if (it != dict.end()) id[t] = static_cast<long>(it->second);
    }
    for (std::size_t t = 0; t < id.size(); ++t) {
      if (id[t] == kNone) continue;
      const auto from = static_cast<std::size_t>(id[t]);
      for (std::size_t u = t + 1; u <= std::min(t + cfg.link_horizon, id.size() - 1); ++u) {
        const long dx = displacement(w.pos[t].x, w.pos[u].x, g.width, g.toroidal);
        const long dy = displacement(w.pos[t].y, w.pos[u].y, g.height, g.toroidal);
        if (std::abs(dx) > rad || std::abs(dy) > rad || (dx == 0 && dy == 0)) continue;
        const long li = table.at(from, dx, dy);
        if (li == kNone || tl.trials[static_cast<std::size_t>(li)] > 0) continue;
        // One trial per scene: repeats inside a scene see the same layout and
        // add no independent evidence. The first arrival decides it.
        ++tl.trials[static_cast<std::size_t>(li)];
        if (id[u] == static_cast<long>(r.links[static_cast<std::size_t>(li)].to)) {
          ++tl.successes[static_cast<std::size_t>(li)];
        }
      }
    }
  });
  for (const auto& tl : tallies) {
    for (std::size_t l = 0; l < r.links.size(); ++l) {
      r.links[l].trials += tl.trials[l];
      r.links[l].successes += tl.successes[l];
    }
  }

  r.analysis = analyze_object_links(r.n_states, r.links, cfg.min_trials, cfg.k_subgraphs,
                                    cfg.regularization, cfg.seed);

  // Step 6: evaluation against first-scene truth.
  r.table = contingency(r.analysis.partition.labels, truth_of_state);
  r.state_truth = std::move(truth_of_state);
  r.matches = match_objects(r.table);
  return r;
}

ObjectAnalysis analyze_object_links(std::size_t n, const std::vector<StoredLink>& links,
                                    std::size_t min_trials, std::size_t k_subgraphs,
                                    double regularization, std::uint64_t seed) {
  if (k_subgraphs < 2) throw ConfigError("objects.k_subgraphs must be >= 2");
  // Step 4: matrix over stored sensory states; the displacement is dropped.
  ObjectAnalysis a;
  a.pair_trials.assign(n * n, 0);
  a.pair_successes.assign(n * n, 0);
  for (const auto& l : links) {
    if (l.from >= n || l.to >= n) throw ShapeError("link endpoint outside the dictionary");
    if (l.successes > l.trials) throw ValidationError("link with more successes than trials");
    a.pair_trials[l.from * n + l.to] += l.trials;
    a.pair_successes[l.from * n + l.to] += l.successes;
  }
  a.probabilities = Matrix(n, n);
  a.observed.assign(n * n, false);
  std::vector<bool> keep(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t tr = a.pair_trials[i * n + j];
      if (tr < min_trials) continue;
      a.observed[i * n + j] = true;
      a.probabilities(i, j) = static_cast<double>(a.pair_successes[i * n + j]) / static_cast<double>(tr);
      // Only positive entries give a state affinity to cluster on.
      if (a.pair_successes[i * n + j] > 0) keep[i] = keep[j] = true;
      ++a.observed_links;
    }
  }
  if (a.observed_links == 0) {
    throw InsufficientDataError("no stored transition reached " + std::to_string(min_trials) +
                                " trials in later scenes");
  }
  if (std::find(keep.begin(), keep.end(), true) == keep.end()) {
    throw InsufficientDataError("no stored transition was confirmed in later scenes");
  }

  // Step 5: spectral clustering of the symmetrized matrix. States without a
  // confirmed transition form the residual subgraph, which counts as one of
  // the k.
  Affinity w = symmetrize_dense(a.probabilities, keep);
  const bool masked = w.size() < n;
  const std::size_t k_spectral = k_subgraphs - (masked ? 1 : 0);
  SubgraphPartition kept;
  if (k_spectral >= 2) {
    SpectralOptions so;
    so.regularization = regularization;
    auto sr = spectral_cluster_detailed(w, k_spectral, Rng::stream(seed, "spectral").next(), so);
    kept = sr.partition;
    a.eigenvalues.assign(sr.eigenvalues.begin(),
                         sr.eigenvalues.begin() + static_cast<long>(std::min<std::size_t>(20, sr.eigenvalues.size())));
    const std::size_t k_max = std::min<std::size_t>(10, sr.eigenvalues.size() - 1);
    a.eigengap_k = k_max >= 2 ? eigengap_suggest(sr.eigenvalues, k_max) : 2;
  } else {
    kept.k = 1;
    kept.labels.assign(w.size(), 0);
  }
  a.partition = expand_to_states(kept, w);
  a.subgraphs = summarize_subgraphs(a.partition, a.pair_trials, a.pair_successes, min_trials);
  return a;
}

}  // namespace smc
