#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "smc/worlds/world.hpp"

namespace smc {

// How the background changes between scenes: every element independently
// with probability p_env_redraw, or all of it at once with that probability.
enum class BackgroundChange { per_element, whole };

struct GridWorldConfig {
  std::size_t width = 100;
  std::size_t height = 100;
  bool toroidal = true;
  std::size_t n_objects = 3;
  std::size_t object_side = 20;
  double p_env_redraw = 0.05;
  BackgroundChange background_change = BackgroundChange::per_element;
  int step = 1;                // motor step length in elements

  void validate() const;
};

// Values are stored in thousandths so equality of sensory states is exact.
using MilliPatch = std::vector<int>;

struct Cell {
  long x = 0;
  long y = 0;
  bool operator==(const Cell&) const = default;
};

struct GridScene {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<int> background;  // milli-units, row-major
  std::vector<int> values;      // background with the objects painted on top
  std::vector<int> owner;       // object id per element, -1 for background
  std::vector<Cell> object_pos; // top-left corner of each object

  int value(std::size_t x, std::size_t y) const { return values[y * width + x]; }
  int owner_at(std::size_t x, std::size_t y) const { return owner[y * width + x]; }
};

constexpr std::size_t kGridSensorSide = 3;
constexpr std::size_t kGridCommands = 4;

// Unit motor deltas: 0:(+s,0) 1:(-s,0) 2:(0,+s) 3:(0,-s), s = cfg.step.
Cell grid_delta(const GridWorldConfig& cfg, MotorDelta d);

MilliPatch grid_draw_background(const GridWorldConfig& cfg, Rng& rng);
std::vector<MilliPatch> grid_draw_objects(const GridWorldConfig& cfg, Rng& rng);

// Background of the next scene. Returns the number of elements redrawn.
std::size_t grid_change_background(const GridWorldConfig& cfg, MilliPatch& background, Rng& rng);

// Positions for every object; with `non_overlap` the footprints are disjoint
// (rejection sampling, ConfigError after 10^4 failed tries).
std::vector<Cell> grid_place_objects(const GridWorldConfig& cfg, std::size_t n_objects, Rng& rng,
                                     bool non_overlap);

// Paints objects over the background in index order, later ones on top.
GridScene grid_paint(const GridWorldConfig& cfg, MilliPatch background,
                     const std::vector<MilliPatch>& objects, const std::vector<Cell>& positions);

// Fresh scene: background redrawn when `redraw_background` (or when `previous`
// is null), otherwise copied from `previous`; objects placed at random.
GridScene grid_build_scene(const GridWorldConfig& cfg, const std::vector<MilliPatch>& objects,
                           Rng& rng, const GridScene* previous, bool redraw_background,
                           bool non_overlap);

// Row-major 3x3 patch centred on `pos`, in thousandths.
std::array<int, 9> grid_sense_milli(const GridWorldConfig& cfg, const GridScene& scene, Cell pos);
SensoryInput grid_sense(const GridWorldConfig& cfg, const GridScene& scene, Cell pos);

// Object id when the sensor sees one object only, background when it sees no
// object, none for mixed windows.
HiddenLabel grid_truth(const GridWorldConfig& cfg, const GridScene& scene, Cell pos);

double grid_contrast(const SensoryInput& patch);
bool grid_salient(const SensoryInput& patch, double tau);

// Contrast threshold passed by `fraction` of sensor readings at random positions.
double grid_calibrate_tau(const GridWorldConfig& cfg, const GridScene& scene, Rng& rng,
                          std::size_t samples = 100000, double fraction = 0.10);

class GridWorld : public World {
 public:
  GridWorld(GridWorldConfig cfg, std::shared_ptr<const GridScene> scene, Cell start);

  std::size_t sensory_dim() const override { return 9; }
  std::size_t motor_cardinality() const override { return 0; }
  std::size_t command_cardinality() const override { return kGridCommands; }

  SensoryInput sense() const override;
  MotorState motor() const override;
  bool apply(MotorDelta d) override;
  void exogenous_step(Rng&) override {}
  HiddenLabel truth() const override;

  Cell position() const { return pos_; }
  const GridScene& scene() const { return *scene_; }
  const GridWorldConfig& config() const { return cfg_; }

 private:
  GridWorldConfig cfg_;
  std::shared_ptr<const GridScene> scene_;
  Cell pos_;
};

// Uniformly random sensor position where the 3x3 window is valid.
Cell grid_random_position(const GridWorldConfig& cfg, Rng& rng);

}  // namespace smc
