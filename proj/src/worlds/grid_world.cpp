#include "smc/worlds/grid_world.hpp"

#include <algorithm>
#include <string>

#include "smc/core/error.hpp"

namespace smc {

namespace {

constexpr int kMilli = 1000;
constexpr std::size_t kPlacementTries = 10000;

long wrap(long v, std::size_t n) {
  const long m = static_cast<long>(n);
  return ((v % m) + m) % m;
}

// Circular gap between two coordinates on a ring of size n.
long ring_gap(long a, long b, std::size_t n) {
  const long d = wrap(a - b, n);
  return std::min(d, static_cast<long>(n) - d);
}

bool footprints_overlap(const GridWorldConfig& cfg, Cell a, Cell b) {
  const long side = static_cast<long>(cfg.object_side);
  if (cfg.toroidal) {
    // On a ring, two intervals of length `side` intersect iff their starts are
    // closer than `side` in at least one direction.
    return ring_gap(a.x, b.x, cfg.width) < side && ring_gap(a.y, b.y, cfg.height) < side;
  }
  return std::abs(a.x - b.x) < side && std::abs(a.y - b.y) < side;
}

bool position_valid(const GridWorldConfig& cfg, Cell p) {
  if (cfg.toroidal) return true;
  return p.x >= 1 && p.y >= 1 && p.x + 1 < static_cast<long>(cfg.width) &&
         p.y + 1 < static_cast<long>(cfg.height);
}

}  // namespace

void GridWorldConfig::validate() const {
  if (width < kGridSensorSide || height < kGridSensorSide) {
    throw ConfigError("grid world smaller than the 3x3 sensor");
  }
  if (object_side == 0 || object_side > std::min(width, height)) {
    throw ConfigError("grid.object_side must be in [1, min(width, height)]");
  }
  if (!(p_env_redraw >= 0.0 && p_env_redraw <= 1.0)) {
    throw ConfigError("grid.p_env_redraw must be in [0, 1]");
  }
  if (step < 1) throw ConfigError("grid.step must be >= 1");
}

Cell grid_delta(const GridWorldConfig& cfg, MotorDelta d) {
  switch (d.index) {
    case 0: return {cfg.step, 0};
    case 1: return {-cfg.step, 0};
    case 2: return {0, cfg.step};
    case 3: return {0, -cfg.step};
    default: throw ShapeError("grid motor command out of range: " + std::to_string(d.index));
  }
}

MilliPatch grid_draw_background(const GridWorldConfig& cfg, Rng& rng) {
  MilliPatch bg(cfg.width * cfg.height);
  for (int& v : bg) v = static_cast<int>(rng.uniform_index(kMilli));
  return bg;
}

std::size_t grid_change_background(const GridWorldConfig& cfg, MilliPatch& background, Rng& rng) {
  if (background.size() != cfg.width * cfg.height) throw ShapeError("background size mismatch");
  if (cfg.background_change == BackgroundChange::whole) {
    if (!rng.bernoulli(cfg.p_env_redraw)) return 0;
    background = grid_draw_background(cfg, rng);
    return background.size();
  }
  std::size_t changed = 0;
  for (int& v : background) {
    if (!rng.bernoulli(cfg.p_env_redraw)) continue;
    v = static_cast<int>(rng.uniform_index(kMilli));
    ++changed;
  }
  return changed;
}

std::vector<MilliPatch> grid_draw_objects(const GridWorldConfig& cfg, Rng& rng) {
  std::vector<MilliPatch> objects(cfg.n_objects, MilliPatch(cfg.object_side * cfg.object_side));
  for (auto& o : objects) {
    for (int& v : o) v = static_cast<int>(rng.uniform_index(kMilli));
  }
  return objects;
}

std::vector<Cell> grid_place_objects(const GridWorldConfig& cfg, std::size_t n_objects, Rng& rng,
                                     bool non_overlap) {
  const std::size_t span_x = cfg.toroidal ? cfg.width : cfg.width - cfg.object_side + 1;
  const std::size_t span_y = cfg.toroidal ? cfg.height : cfg.height - cfg.object_side + 1;
  for (std::size_t attempt = 0; attempt < kPlacementTries; ++attempt) {
    std::vector<Cell> pos(n_objects);
    for (auto& p : pos) {
      p.x = static_cast<long>(rng.uniform_index(span_x));
      p.y = static_cast<long>(rng.uniform_index(span_y));
    }
    if (!non_overlap) return pos;
    bool ok = true;
    for (std::size_t i = 0; i < n_objects && ok; ++i) {
      for (std::size_t j = 0; j < i && ok; ++j) ok = !footprints_overlap(cfg, pos[i], pos[j]);
    }
    if (ok) return pos;
  }
  throw ConfigError("could not place objects without overlap after 10000 tries");
}

GridScene grid_paint(const GridWorldConfig& cfg, MilliPatch background,
                     const std::vector<MilliPatch>& objects, const std::vector<Cell>& positions) {
  if (background.size() != cfg.width * cfg.height) throw ShapeError("background size mismatch");
  if (objects.size() != positions.size()) throw ShapeError("one position per object required");
  GridScene s;
  s.width = cfg.width;
  s.height = cfg.height;
  s.values = background;
  s.background = std::move(background);
  s.owner.assign(cfg.width * cfg.height, -1);
  s.object_pos = positions;
  const std::size_t side = cfg.object_side;
  for (std::size_t o = 0; o < objects.size(); ++o) {
    if (objects[o].size() != side * side) throw ShapeError("object patch size mismatch");
    for (std::size_t dy = 0; dy < side; ++dy) {
      for (std::size_t dx = 0; dx < side; ++dx) {
        long x = positions[o].x + static_cast<long>(dx);
        long y = positions[o].y + static_cast<long>(dy);
        if (cfg.toroidal) {
          x = wrap(x, cfg.width);
          y = wrap(y, cfg.height);
        } else if (x < 0 || y < 0 || x >= static_cast<long>(cfg.width) ||
                   y >= static_cast<long>(cfg.height)) {
          continue;
        }
        const std::size_t i = static_cast<std::size_t>(y) * cfg.width + static_cast<std::size_t>(x);
        s.values[i] = objects[o][dy * side + dx];
        s.owner[i] = static_cast<int>(o);
      }
    }
  }
  return s;
}

GridScene grid_build_scene(const GridWorldConfig& cfg, const std::vector<MilliPatch>& objects,
                           Rng& rng, const GridScene* previous, bool redraw_background,
                           bool non_overlap) {
  MilliPatch bg = (redraw_background || previous == nullptr) ? grid_draw_background(cfg, rng)
                                                             : previous->background;
  auto pos = grid_place_objects(cfg, objects.size(), rng, non_overlap);
  return grid_paint(cfg, std::move(bg), objects, pos);
}

std::array<int, 9> grid_sense_milli(const GridWorldConfig& cfg, const GridScene& scene,
                                    Cell pos) {
  if (!position_valid(cfg, pos)) throw PositionError("grid sensor window leaves the world");
  std::array<int, 9> out{};
  std::size_t k = 0;
  for (long dy = -1; dy <= 1; ++dy) {
    for (long dx = -1; dx <= 1; ++dx) {
      const long x = cfg.toroidal ? wrap(pos.x + dx, cfg.width) : pos.x + dx;
      const long y = cfg.toroidal ? wrap(pos.y + dy, cfg.height) : pos.y + dy;
      out[k++] = scene.value(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    }
  }
  return out;
}

SensoryInput grid_sense(const GridWorldConfig& cfg, const GridScene& scene, Cell pos) {
  auto m = grid_sense_milli(cfg, scene, pos);
  SensoryInput s;
  s.values.reserve(9);
  for (int v : m) s.values.push_back(static_cast<double>(v) / kMilli);
  return s;
}

HiddenLabel grid_truth(const GridWorldConfig& cfg, const GridScene& scene, Cell pos) {
  if (!position_valid(cfg, pos)) throw PositionError("grid sensor window leaves the world");
  int first = 0;
  bool uniform = true;
  bool initialised = false;
  for (long dy = -1; dy <= 1; ++dy) {
    for (long dx = -1; dx <= 1; ++dx) {
      const long x = cfg.toroidal ? wrap(pos.x + dx, cfg.width) : pos.x + dx;
      const long y = cfg.toroidal ? wrap(pos.y + dy, cfg.height) : pos.y + dy;
      const int o = scene.owner_at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      if (!initialised) {
        first = o;
        initialised = true;
      } else if (o != first) {
        uniform = false;
      }
    }
  }
  if (!uniform) return {};
  if (first < 0) return {LabelKind::background, -1};
  return {LabelKind::object_id, first};
}

double grid_contrast(const SensoryInput& patch) {
  if (patch.values.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(patch.values.begin(), patch.values.end());
  return *hi - *lo;
}

bool grid_salient(const SensoryInput& patch, double tau) { return grid_contrast(patch) >= tau; }

double grid_calibrate_tau(const GridWorldConfig& cfg, const GridScene& scene, Rng& rng,
                          std::size_t samples, double fraction) {
  if (samples == 0) throw InsufficientDataError("salience calibration needs samples");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("salience fraction must be in (0,1)");
  std::vector<double> c(samples);
  for (auto& v : c) v = grid_contrast(grid_sense(cfg, scene, grid_random_position(cfg, rng)));
  const auto rank = static_cast<std::size_t>((1.0 - fraction) * static_cast<double>(samples));
  std::nth_element(c.begin(), c.begin() + static_cast<long>(rank), c.end());
  return c[rank];
}

Cell grid_random_position(const GridWorldConfig& cfg, Rng& rng) {
  if (cfg.toroidal) {
    return {static_cast<long>(rng.uniform_index(cfg.width)),
            static_cast<long>(rng.uniform_index(cfg.height))};
  }
  return {1 + static_cast<long>(rng.uniform_index(cfg.width - 2)),
          1 + static_cast<long>(rng.uniform_index(cfg.height - 2))};
}

GridWorld::GridWorld(GridWorldConfig cfg, std::shared_ptr<const GridScene> scene, Cell start)
    : cfg_(std::move(cfg)), scene_(std::move(scene)), pos_(start) {
  cfg_.validate();
  if (!scene_ || scene_->width != cfg_.width || scene_->height != cfg_.height) {
    throw ShapeError("scene does not match the grid configuration");
  }
  if (!position_valid(cfg_, pos_)) throw PositionError("grid start position leaves the world");
}

SensoryInput GridWorld::sense() const { return grid_sense(cfg_, *scene_, pos_); }

MotorState GridWorld::motor() const {
  return {static_cast<std::size_t>(pos_.y) * cfg_.width + static_cast<std::size_t>(pos_.x)};
}

bool GridWorld::apply(MotorDelta d) {
  const Cell step = grid_delta(cfg_, d);
  Cell next{pos_.x + step.x, pos_.y + step.y};
  if (cfg_.toroidal) {
    pos_ = {wrap(next.x, cfg_.width), wrap(next.y, cfg_.height)};
    return true;
  }
  Cell clamped{std::clamp(next.x, 1L, static_cast<long>(cfg_.width) - 2),
               std::clamp(next.y, 1L, static_cast<long>(cfg_.height) - 2)};
  pos_ = clamped;
  return clamped == next;
}

HiddenLabel GridWorld::truth() const { return grid_truth(cfg_, *scene_, pos_); }

}  // namespace smc
