#include "smc/experiments/visual_field.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <string>

#include "smc/core/error.hpp"
#include "smc/core/parallel.hpp"
#include "smc/explore/babble.hpp"

namespace smc {

namespace {

using PatchKey = std::uint32_t;

struct SceneWalk {
  std::vector<std::array<PatchKey, kRetinaFields>> keys;  // per sample
  std::vector<Transition> transitions;
  std::size_t clamped = 0;
};

SceneWalk walk_scene(const VisualFieldConfig& cfg, std::size_t s) {
  Rng scene_rng = Rng::stream(cfg.seed, "retina-scene", s);
  auto scene = std::make_shared<const RetinaScene>(retina_render(cfg.retina, scene_rng));
  RetinaWorld world(cfg.retina, scene, retina_random_position(cfg.retina, scene_rng));
  BabbleConfig bc;
  bc.steps = cfg.steps_per_scene;
  bc.policy = BabblePolicy::uniform_motor_delta;
  bc.seed = Rng::stream(cfg.seed, "retina-babble", s).next();
  bc.episode = static_cast<int>(s);
  ExplorationLog log = run_babble(world, bc);

  const std::size_t fs = cfg.retina.field_size();
  SceneWalk w;
  w.transitions = std::move(log.transitions);
  w.clamped = log.clamped;
  w.keys.reserve(log.samples.size());
  for (const auto& sample : log.samples) {
    std::array<PatchKey, kRetinaFields> k{};
    for (std::size_t f = 0; f < kRetinaFields; ++f) {
      PatchKey key = 0;
      for (std::size_t i = 0; i < fs; ++i) {
        if (sample.sensory.values[f * fs + i] != 0.0) key |= PatchKey{1} << i;
      }
      k[f] = key;
    }
    w.keys.push_back(k);
  }
  return w;
}

}  // namespace

std::uint64_t group_trials(const TransitionCounts& counts, std::size_t from, std::size_t to,
                           std::size_t cmd, std::size_t group_size) {
  auto row = counts.row(from, cmd);
  const std::size_t lo = to / group_size * group_size;
  std::uint64_t n = 0;
  for (std::size_t t = lo; t < lo + group_size; ++t) n += row[t];
  return n;
}

VisualFieldResult run_visual_field(const VisualFieldConfig& cfg) {
  cfg.retina.validate();
  if (cfg.K < 2) throw ConfigError("visual.K must be >= 2");
  if (cfg.n_scenes == 0) throw ConfigError("visual.n_scenes must be >= 1");
  if (cfg.retina.field_size() > 32) throw ConfigError("receptive fields larger than 32 pixels");

  std::vector<SceneWalk> walks(cfg.n_scenes);
  parallel_for(cfg.n_scenes, cfg.jobs, [&](std::size_t s) { walks[s] = walk_scene(cfg, s); });

  // Pool every field's patch; binary patches repeat, so cluster distinct ones.
  std::map<PatchKey, double> multiplicity;
  for (const auto& w : walks) {
    for (const auto& k : w.keys) {
      for (PatchKey key : k) multiplicity[key] += 1.0;
    }
  }
  const std::size_t fs = cfg.retina.field_size();
  if (multiplicity.size() < cfg.K) {
    throw InsufficientDataError("only " + std::to_string(multiplicity.size()) +
                                " distinct patches for K=" + std::to_string(cfg.K));
  }
  Matrix pts(multiplicity.size(), fs);
  std::vector<double> weights;
  weights.reserve(multiplicity.size());
  std::size_t row = 0;
  for (const auto& [key, count] : multiplicity) {
    for (std::size_t i = 0; i < fs; ++i) pts(row, i) = (key >> i) & 1U ? 1.0 : 0.0;
    weights.push_back(count);
    ++row;
  }

  VisualFieldResult r;
  r.distinct_patches = multiplicity.size();
  r.patches = kmeans_fit_weighted(pts, weights, cfg.K, Rng::stream(cfg.seed, "kmeans").next());
  std::map<PatchKey, std::size_t> cluster;
  {
    auto labels = kmeans_assign_all(r.patches, pts);
    std::size_t i = 0;
    for (const auto& entry : multiplicity) cluster[entry.first] = labels[i++];
  }

  const std::size_t n_states = kRetinaFields * cfg.K;
  r.counts = TransitionCounts(n_states, n_states, kSaccades);
  for (const auto& w : walks) {
    r.n_clamped += w.clamped;
    for (const auto& tr : w.transitions) {
      ++r.n_transitions;
      const auto& before = w.keys[tr.from];
      const auto& after = w.keys[tr.to];
      for (std::size_t a = 0; a < kRetinaFields; ++a) {
        for (std::size_t b = 0; b < kRetinaFields; ++b) {
          r.counts.record(a * cfg.K + cluster[before[a]], b * cfg.K + cluster[after[b]],
                          tr.delta->index);
        }
      }
    }
  }
  r.analysis = analyze_visual_counts(r.counts, cfg.retina, cfg.K, cfg.trial_threshold);
  return r;
}

VisualAnalysis analyze_visual_counts(const TransitionCounts& counts, const RetinaWorldConfig& retina,
                                     std::size_t k, std::size_t trial_threshold) {
  const std::size_t n_states = kRetinaFields * k;
  if (counts.n_from() != n_states || counts.n_to() != n_states || counts.n_cmd() != kSaccades) {
    throw ShapeError("visual-field counts must be " + std::to_string(n_states) + "x" +
                     std::to_string(n_states) + "x" + std::to_string(kSaccades));
  }
  VisualAnalysis a;
  a.transitions = normalize_grouped(counts, k);
  for (std::size_t q = 0; q < kSaccades; ++q) {
    a.tables.push_back(correspondence_table(retina, MotorDelta{q}));
  }
  a.dominance = diagonal_dominance(a.transitions, k, a.tables);

  for (std::size_t q = 0; q < kSaccades; ++q) {
    for (std::size_t f = 0; f < n_states; ++f) {
      for (std::size_t t = 0; t < n_states; ++t) {
        if (!a.transitions.entry_observed(f, t, q)) continue;
        const double p = a.transitions.at(f, t, q);
        const std::uint64_t trials = group_trials(counts, f, t, q, k);
        if (p > 0.5 && trials >= trial_threshold) {
          a.high_entries.push_back({f, t, q, p, trials, on_correspondence(f, t, k, a.tables[q])});
        }
      }
    }
  }
  a.rows_dominate = diagonal_rows_dominate(counts, a, k, trial_threshold);
  return a;
}

bool diagonal_rows_dominate(const TransitionCounts& counts, const VisualAnalysis& a, std::size_t k,
                            std::size_t trial_threshold) {
  const auto& t = a.transitions;
  for (std::size_t q = 0; q < t.n_cmd(); ++q) {
    for (std::size_t f = 0; f < t.n_from(); ++f) {
      double best_off = -1.0;
      for (std::size_t to = 0; to < t.n_to(); ++to) {
        if (t.entry_observed(f, to, q) && !on_correspondence(f, to, k, a.tables[q])) {
          best_off = std::max(best_off, t.at(f, to, q));
        }
      }
      for (std::size_t to = 0; to < t.n_to(); ++to) {
        if (!on_correspondence(f, to, k, a.tables[q]) || !t.entry_observed(f, to, q)) continue;
        if (group_trials(counts, f, to, q, k) < trial_threshold) continue;
        if (!(t.at(f, to, q) > best_off)) return false;
      }
    }
  }
  return true;
}

}  // namespace smc
