#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "smc/worlds/grid_world.hpp"
#include "smc/worlds/world.hpp"

namespace smc {

struct RetinaWorldConfig {
  std::size_t width = 50;
  std::size_t height = 50;
  std::size_t window = 10;  // square window, split into 2x2 receptive fields
  std::size_t square_count = 10;
  std::size_t side_min = 3;
  std::size_t side_max = 12;
  bool noise_mode = false;

  std::size_t field() const { return window / 2; }
  std::size_t field_size() const { return field() * field(); }
  void validate() const;
};

enum Field : std::size_t { TL = 0, TR = 1, BL = 2, BR = 3 };
constexpr std::size_t kRetinaFields = 4;
constexpr std::size_t kSaccades = 8;

const char* field_name(std::size_t f);

struct RetinaScene {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // 1 = white

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

// Black scene with random white squares, or fair-coin pixels in noise mode.
RetinaScene retina_render(const RetinaWorldConfig& cfg, Rng& rng);
// Paints one white square, clipped at the scene border.
void retina_paint_square(RetinaScene& scene, long x, long y, std::size_t side);

// Four row-major receptive fields (TL, TR, BL, BR) of the window whose top-left
// corner is `pos`.
std::array<SensoryInput, kRetinaFields> retina_sense(const RetinaWorldConfig& cfg,
                                                     const RetinaScene& scene, Cell pos);

// Saccade displacement in pixels, y pointing down:
// 0:(+f,0) 1:(-f,0) 2:(0,+f) 3:(0,-f) 4:(+f,+f) 5:(+f,-f) 6:(-f,+f) 7:(-f,-f).
Cell saccade_delta(const RetinaWorldConfig& cfg, MotorDelta d);

struct SaccadeResult {
  Cell pos;
  bool clamped = false;
};

// Moves the window, clamping it inside the scene; a clamped move is flagged.
SaccadeResult retina_saccade(const RetinaWorldConfig& cfg, Cell pos, MotorDelta d);

// Field pairs (a, b): after the saccade, field b shows what field a showed before.
std::vector<std::pair<std::size_t, std::size_t>> correspondence_table(const RetinaWorldConfig& cfg,
                                                                      MotorDelta d);

// Portable graymap (P2) dump of a scene.
void write_pgm(const RetinaScene& scene, const std::string& path);

class RetinaWorld : public World {
 public:
  RetinaWorld(RetinaWorldConfig cfg, std::shared_ptr<const RetinaScene> scene, Cell start);

  std::size_t sensory_dim() const override { return kRetinaFields * cfg_.field_size(); }
  std::size_t motor_cardinality() const override { return 0; }
  std::size_t command_cardinality() const override { return kSaccades; }

  // The four fields concatenated in TL, TR, BL, BR order.
  SensoryInput sense() const override;
  MotorState motor() const override;
  bool apply(MotorDelta d) override;
  void exogenous_step(Rng&) override {}
  HiddenLabel truth() const override { return {}; }

  Cell position() const { return pos_; }
  const RetinaWorldConfig& config() const { return cfg_; }

 private:
  RetinaWorldConfig cfg_;
  std::shared_ptr<const RetinaScene> scene_;
  Cell pos_;
};

Cell retina_random_position(const RetinaWorldConfig& cfg, Rng& rng);

}  // namespace smc
