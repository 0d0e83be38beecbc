#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace smc {

// One sensory reading. Its length is the owning world's sensory dimension.
struct SensoryInput {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const SensoryInput&) const = default;
};

// Absolute motor configuration, index in [0, M).
struct MotorState {
  std::size_t index = 0;
  bool operator==(const MotorState&) const = default;
};

// Discrete motor command / variation, index in [0, Q).
struct MotorDelta {
  std::size_t index = 0;
  bool operator==(const MotorDelta&) const = default;
};

enum class LabelKind { none, environment_state, object_id, background };

// Ground truth about the hidden world state. Only evaluation code reads it; the
// learning code receives SensorimotorSample, which does not carry it.
struct HiddenLabel {
  LabelKind kind = LabelKind::none;
  int id = -1;
  bool operator==(const HiddenLabel&) const = default;
};

struct SensorimotorSample {
  SensoryInput sensory;
  MotorState motor;
  int episode = 0;
  int step = 0;
  bool operator==(const SensorimotorSample&) const = default;
};

// Consecutive-sample transition inside an exploration log.
struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::optional<MotorDelta> delta;
  bool operator==(const Transition&) const = default;
};

const char* to_string(LabelKind kind);

// Throws ValidationError unless `input` has `dim` finite values.
void validate_sensory(const SensoryInput& input, std::size_t dim);

}  // namespace smc
