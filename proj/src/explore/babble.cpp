#include "smc/explore/babble.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "smc/core/error.hpp"
#include "smc/core/rng.hpp"

namespace smc {

ExplorationLog run_babble(World& world, const BabbleConfig& cfg) {
  if (cfg.steps < 2) throw ConfigError("babbling needs at least 2 steps");
  const bool absolute = cfg.policy == BabblePolicy::uniform_motor_state;
  if (absolute && world.motor_cardinality() == 0) {
    throw ConfigError("uniform_motor_state policy needs a world with absolute motor states");
  }
  if (!absolute && world.command_cardinality() == 0) {
    throw ConfigError("uniform_motor_delta policy needs a world with motor commands");
  }

  Rng policy = Rng::stream(cfg.seed, "policy");
  Rng exo = Rng::stream(cfg.seed, "world");
  ExplorationLog log;
  log.samples.reserve(cfg.steps);
  log.transitions.reserve(cfg.steps);

  for (std::size_t t = 0; t < cfg.steps; ++t) {
    std::optional<MotorDelta> delta;
    bool moved = true;
    if (absolute) {
      world.set_motor(MotorState{policy.uniform_index(world.motor_cardinality())});
    } else {
      delta = MotorDelta{policy.uniform_index(world.command_cardinality())};
      moved = world.apply(*delta);
    }
    const HiddenLabel before = world.truth();
    log.push(SensorimotorSample{world.sense(), world.motor(), cfg.episode, static_cast<int>(t)},
             before);
    if (t > 0) {
      if (moved) {
        log.transitions.push_back(Transition{t - 1, t, delta});
      } else {
        ++log.clamped;
      }
    }
    world.exogenous_step(exo);
    if (before.kind == LabelKind::environment_state && !(world.truth() == before) &&
        t + 1 < cfg.steps) {
      log.env_change_steps.push_back(t + 1);
    }
  }
  return log;
}

std::vector<ExplorationLog> split_episodes(const ExplorationLog& log,
                                           const std::vector<std::size_t>& boundaries) {
  const std::size_t n = log.samples.size();
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i] == 0 || boundaries[i] >= n) {
      throw ValidationError("episode boundary " + std::to_string(boundaries[i]) +
                            " outside (0, " + std::to_string(n) + ")");
    }
    if (i > 0 && boundaries[i] <= boundaries[i - 1]) {
      throw ValidationError("episode boundaries must be strictly increasing");
    }
  }
  std::vector<std::size_t> starts{0};
  starts.insert(starts.end(), boundaries.begin(), boundaries.end());
  starts.push_back(n);

  std::vector<ExplorationLog> out(starts.size() - 1);
  std::vector<std::size_t> segment(n);
  for (std::size_t s = 0; s + 1 < starts.size(); ++s) {
    for (std::size_t i = starts[s]; i < starts[s + 1]; ++i) {
      segment[i] = s;
      out[s].push(log.samples[i], log.truth()[i]);
    }
  }
  for (const auto& tr : log.transitions) {
    const std::size_t s = segment[tr.from];
    if (segment[tr.to] != s) continue;
    out[s].transitions.push_back(Transition{tr.from - starts[s], tr.to - starts[s], tr.delta});
  }
  for (std::size_t step : log.env_change_steps) {
    const std::size_t s = segment[step];
    if (step > starts[s]) out[s].env_change_steps.push_back(step - starts[s]);
  }
  return out;
}

TransitionCounts count_transitions(const ExplorationLog& log,
                                   const std::vector<std::size_t>& state_of_sample,
                                   std::size_t n_states, std::size_t n_cmd) {
  if (state_of_sample.size() != log.samples.size()) {
    throw ShapeError("one state per sample required");
  }
  TransitionCounts counts(n_states, n_states, n_cmd);
  for (const auto& tr : log.transitions) {
    std::size_t cmd = 0;
    if (n_cmd > 1) {
      if (!tr.delta) throw ValidationError("transition without a motor command");
      cmd = tr.delta->index;
    }
    counts.record(state_of_sample[tr.from], state_of_sample[tr.to], cmd);
  }
  return counts;
}

void write_log_csv(const ExplorationLog& log, const std::filesystem::path& path, bool emit_truth) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const std::size_t dim = log.samples.empty() ? 0 : log.samples.front().sensory.size();
  out << "step,motor";
  for (std::size_t i = 0; i < dim; ++i) out << ",s" << i;
  out << ",episode";
  if (emit_truth) out << ",truth_kind,truth_id";
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto& s = log.samples[i];
    out << s.step << ',' << s.motor.index;
    for (double v : s.sensory.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << ',' << s.episode;
    if (emit_truth) out << ',' << to_string(log.truth()[i].kind) << ',' << log.truth()[i].id;
    out << '\n';
  }
}

}  // namespace smc
