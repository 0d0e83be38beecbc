#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "smc/core/transitions.hpp"
#include "smc/core/types.hpp"
#include "smc/worlds/world.hpp"

namespace smc {

enum class BabblePolicy { uniform_motor_state, uniform_motor_delta };

struct BabbleConfig {
  std::size_t steps = 1000;
  BabblePolicy policy = BabblePolicy::uniform_motor_state;
  std::uint64_t seed = 0;
  int episode = 0;
};

// Walk through a world. Learning code reads `samples` and `transitions`; the
// hidden labels sit behind truth(), which only evaluation code calls.
class ExplorationLog {
 public:
  std::vector<SensorimotorSample> samples;
  std::vector<Transition> transitions;
  // Steps at which the hidden environment state had just changed.
  std::vector<std::size_t> env_change_steps;
  std::size_t clamped = 0;

  const std::vector<HiddenLabel>& truth() const { return truth_; }
  void push(SensorimotorSample s, HiddenLabel label) {
    samples.push_back(std::move(s));
    truth_.push_back(label);
  }

  bool operator==(const ExplorationLog&) const = default;

 private:
  std::vector<HiddenLabel> truth_;
};

// Each step draws a motor action from the policy stream, applies it, senses,
// records the sample and the transition from the previous step (unless the
// move was clamped), then lets the environment change on its own.
ExplorationLog run_babble(World& world, const BabbleConfig& cfg);

// Cuts the log before each boundary index. Samples are kept as they are; any
// transition crossing a cut is dropped and indices become segment-local.
std::vector<ExplorationLog> split_episodes(const ExplorationLog& log,
                                           const std::vector<std::size_t>& boundaries);

// Counts transitions between the discrete states assigned to the samples.
// With `by_command` the slice is the transition's motor delta.
TransitionCounts count_transitions(const ExplorationLog& log,
                                   const std::vector<std::size_t>& state_of_sample,
                                   std::size_t n_states, std::size_t n_cmd = 1);

// Line-oriented dump: step, motor, sensory values, episode; truth columns only
// when `emit_truth`.
void write_log_csv(const ExplorationLog& log, const std::filesystem::path& path, bool emit_truth);

}  // namespace smc
