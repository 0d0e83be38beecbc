#pragma once

#include <cstddef>
#include <vector>

#include "smc/worlds/world.hpp"

namespace smc {

struct WallWorldConfig {
  std::size_t n_env_states = 15;
  double distance_min = 1.0;
  double distance_max = 8.0;
  std::size_t n_angles = 40;  // spread over [-60, +60] degrees
  double s_max = 16.0;
  double p_env = 0.01;

  // Wall distances, evenly spaced over [distance_min, distance_max].
  std::vector<double> distances() const;
  void validate() const;
};

// Angle in radians of motor state `m`.
double wall_angle(const WallWorldConfig& cfg, std::size_t m);

// Range reading of a ray at the motor's angle toward a wall at the env's distance.
SensoryInput wall_sense(const WallWorldConfig& cfg, std::size_t env, MotorState motor);

// With probability p_env jump to a uniformly chosen different state.
std::size_t wall_env_step(const WallWorldConfig& cfg, std::size_t env, Rng& rng);

class WallWorld : public World {
 public:
  WallWorld(WallWorldConfig cfg, std::size_t initial_env);
  // Initial environment state drawn from `rng`.
  WallWorld(WallWorldConfig cfg, Rng& rng);

  std::size_t sensory_dim() const override { return 1; }
  std::size_t motor_cardinality() const override { return cfg_.n_angles; }
  std::size_t command_cardinality() const override { return 0; }

  SensoryInput sense() const override;
  MotorState motor() const override { return motor_; }
  void set_motor(MotorState m) override;
  void exogenous_step(Rng& rng) override;
  HiddenLabel truth() const override;

  std::size_t env() const { return env_; }
  const WallWorldConfig& config() const { return cfg_; }

 private:
  WallWorldConfig cfg_;
  std::size_t env_ = 0;
  MotorState motor_;
};

}  // namespace smc
