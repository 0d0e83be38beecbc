#include "smc/worlds/wall_world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smc/core/error.hpp"

namespace smc {

void World::set_motor(MotorState) {
  throw ConfigError("this world is driven by motor commands, not absolute motor states");
}

bool World::apply(MotorDelta) {
  throw ConfigError("this world takes absolute motor states, not motor commands");
}

std::vector<double> WallWorldConfig::distances() const {
  std::vector<double> d(n_env_states);
  for (std::size_t i = 0; i < n_env_states; ++i) {
    const double t = n_env_states > 1 ? static_cast<double>(i) / (n_env_states - 1) : 0.0;
    d[i] = distance_min + t * (distance_max - distance_min);
  }
  return d;
}

void WallWorldConfig::validate() const {
  if (n_env_states < 2) throw ConfigError("wall.n_env_states must be >= 2");
  if (!(p_env >= 0.0 && p_env < 1.0)) throw ConfigError("wall.p_env must be in [0, 1)");
  if (n_angles < 1) throw ConfigError("wall.n_angles must be >= 1");
  if (!(distance_min > 0.0) || distance_max < distance_min) {
    throw ConfigError("wall distances must satisfy 0 < distance_min <= distance_max");
  }
  if (!(s_max > 0.0)) throw ConfigError("wall.s_max must be positive");
}

double wall_angle(const WallWorldConfig& cfg, std::size_t m) {
  const double deg = cfg.n_angles > 1
                         ? -60.0 + 120.0 * static_cast<double>(m) / (cfg.n_angles - 1)
                         : 0.0;
  return deg * std::numbers::pi / 180.0;
}

SensoryInput wall_sense(const WallWorldConfig& cfg, std::size_t env, MotorState motor) {
  if (env >= cfg.n_env_states) throw ShapeError("environment state out of range");
  if (motor.index >= cfg.n_angles) throw ShapeError("motor state out of range");
  const double d = cfg.distances()[env];
  const double s = std::min(d / std::cos(wall_angle(cfg, motor.index)), cfg.s_max);
  return SensoryInput{{s}};
}

std::size_t wall_env_step(const WallWorldConfig& cfg, std::size_t env, Rng& rng) {
  if (!rng.bernoulli(cfg.p_env)) return env;
  const std::size_t other = rng.uniform_index(cfg.n_env_states - 1);
  return other < env ? other : other + 1;
}

WallWorld::WallWorld(WallWorldConfig cfg, std::size_t initial_env)
    : cfg_(std::move(cfg)), env_(initial_env) {
  cfg_.validate();
  if (env_ >= cfg_.n_env_states) throw ShapeError("initial environment state out of range");
}

namespace {

std::size_t draw_env(const WallWorldConfig& cfg, Rng& rng) {
  cfg.validate();
  return static_cast<std::size_t>(rng.uniform_index(cfg.n_env_states));
}

}  // namespace

WallWorld::WallWorld(WallWorldConfig cfg, Rng& rng) : WallWorld(cfg, draw_env(cfg, rng)) {}

SensoryInput WallWorld::sense() const { return wall_sense(cfg_, env_, motor_); }

void WallWorld::set_motor(MotorState m) {
  if (m.index >= cfg_.n_angles) throw ShapeError("motor state out of range");
  motor_ = m;
}

void WallWorld::exogenous_step(Rng& rng) { env_ = wall_env_step(cfg_, env_, rng); }

HiddenLabel WallWorld::truth() const {
  return HiddenLabel{LabelKind::environment_state, static_cast<int>(env_)};
}

}  // namespace smc
