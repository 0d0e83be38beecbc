#pragma once

#include <cstddef>

#include "smc/core/rng.hpp"
#include "smc/core/types.hpp"

namespace smc {

// Agent-environment simulator S = phi_E(M). sense() depends only on the hidden
// state and the motor position; exogenous_step() is the only mutator of the
// hidden state; truth() is for evaluation code only.
class World {
 public:
  virtual ~World() = default;

  virtual std::size_t sensory_dim() const = 0;
  // Number of absolute motor states, or 0 when the world is driven by deltas.
  virtual std::size_t motor_cardinality() const = 0;
  // Number of motor commands, or 0 when the world takes absolute states.
  virtual std::size_t command_cardinality() const = 0;

  virtual SensoryInput sense() const = 0;
  virtual MotorState motor() const = 0;

  // Move to an absolute motor state. Only valid when motor_cardinality() > 0.
  virtual void set_motor(MotorState m);
  // Apply a motor command; returns false when the move was clamped.
  virtual bool apply(MotorDelta d);

  virtual void exogenous_step(Rng& rng) = 0;
  virtual HiddenLabel truth() const = 0;
};

}  // namespace smc
