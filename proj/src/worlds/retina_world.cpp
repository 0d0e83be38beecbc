#include "smc/worlds/retina_world.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "smc/core/error.hpp"

namespace smc {

namespace {

Cell field_offset(const RetinaWorldConfig& cfg, std::size_t f) {
  const long s = static_cast<long>(cfg.field());
  return {static_cast<long>(f % 2) * s, static_cast<long>(f / 2) * s};
}

long max_x(const RetinaWorldConfig& cfg) { return static_cast<long>(cfg.width - cfg.window); }
long max_y(const RetinaWorldConfig& cfg) { return static_cast<long>(cfg.height - cfg.window); }

}  // namespace

void RetinaWorldConfig::validate() const {
  if (window < 2 || window % 2 != 0) throw ConfigError("retina.window must be even and >= 2");
  if (window > width || window > height) throw ConfigError("retina window does not fit the scene");
  if (side_min < 1 || side_max < side_min) {
    throw ConfigError("retina square sides must satisfy 1 <= side_min <= side_max");
  }
}

const char* field_name(std::size_t f) {
  static const char* names[] = {"TL", "TR", "BL", "BR"};
  return f < kRetinaFields ? names[f] : "?";
}

void retina_paint_square(RetinaScene& scene, long x, long y, std::size_t side) {
  const long s = static_cast<long>(side);
  for (long yy = std::max(0L, y); yy < std::min(y + s, static_cast<long>(scene.height)); ++yy) {
    for (long xx = std::max(0L, x); xx < std::min(x + s, static_cast<long>(scene.width)); ++xx) {
      scene.pixels[static_cast<std::size_t>(yy) * scene.width + static_cast<std::size_t>(xx)] = 1;
    }
  }
}

RetinaScene retina_render(const RetinaWorldConfig& cfg, Rng& rng) {
  cfg.validate();
  RetinaScene scene{cfg.width, cfg.height, std::vector<std::uint8_t>(cfg.width * cfg.height, 0)};
  if (cfg.noise_mode) {
    for (auto& p : scene.pixels) p = static_cast<std::uint8_t>(rng.uniform_index(2));
    return scene;
  }
  for (std::size_t i = 0; i < cfg.square_count; ++i) {
    const std::size_t side = cfg.side_min + rng.uniform_index(cfg.side_max - cfg.side_min + 1);
    const long x = static_cast<long>(rng.uniform_index(cfg.width));
    const long y = static_cast<long>(rng.uniform_index(cfg.height));
    retina_paint_square(scene, x, y, side);
  }
  return scene;
}

std::array<SensoryInput, kRetinaFields> retina_sense(const RetinaWorldConfig& cfg,
                                                     const RetinaScene& scene, Cell pos) {
  if (pos.x < 0 || pos.y < 0 || pos.x + static_cast<long>(cfg.window) > static_cast<long>(scene.width) ||
      pos.y + static_cast<long>(cfg.window) > static_cast<long>(scene.height)) {
    throw PositionError("retina window at (" + std::to_string(pos.x) + ", " +
                        std::to_string(pos.y) + ") leaves the scene");
  }
  std::array<SensoryInput, kRetinaFields> out;
  const std::size_t f = cfg.field();
  for (std::size_t k = 0; k < kRetinaFields; ++k) {
    const Cell off = field_offset(cfg, k);
    out[k].values.reserve(f * f);
    for (std::size_t dy = 0; dy < f; ++dy) {
      for (std::size_t dx = 0; dx < f; ++dx) {
        out[k].values.push_back(scene.at(static_cast<std::size_t>(pos.x + off.x) + dx,
                                         static_cast<std::size_t>(pos.y + off.y) + dy));
      }
    }
  }
  return out;
}

Cell saccade_delta(const RetinaWorldConfig& cfg, MotorDelta d) {
  static const int table[kSaccades][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                          {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  if (d.index >= kSaccades) throw ShapeError("saccade index out of range: " + std::to_string(d.index));
  const long s = static_cast<long>(cfg.field());
  return {table[d.index][0] * s, table[d.index][1] * s};
}

SaccadeResult retina_saccade(const RetinaWorldConfig& cfg, Cell pos, MotorDelta d) {
  const Cell step = saccade_delta(cfg, d);
  const Cell want{pos.x + step.x, pos.y + step.y};
  const Cell got{std::clamp(want.x, 0L, max_x(cfg)), std::clamp(want.y, 0L, max_y(cfg))};
  return {got, !(got == want)};
}

std::vector<std::pair<std::size_t, std::size_t>> correspondence_table(const RetinaWorldConfig& cfg,
                                                                      MotorDelta d) {
  const Cell step = saccade_delta(cfg, d);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < kRetinaFields; ++a) {
    for (std::size_t b = 0; b < kRetinaFields; ++b) {
      const Cell oa = field_offset(cfg, a);
      const Cell ob = field_offset(cfg, b);
      if (oa.x - ob.x == step.x && oa.y - ob.y == step.y) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

void write_pgm(const RetinaScene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "P2\n" << scene.width << ' ' << scene.height << "\n1\n";
  for (std::size_t y = 0; y < scene.height; ++y) {
    for (std::size_t x = 0; x < scene.width; ++x) {
      out << static_cast<int>(scene.at(x, y)) << (x + 1 == scene.width ? '\n' : ' ');
    }
  }
}

RetinaWorld::RetinaWorld(RetinaWorldConfig cfg, std::shared_ptr<const RetinaScene> scene,
                         Cell start)
    : cfg_(std::move(cfg)), scene_(std::move(scene)), pos_(start) {
  cfg_.validate();
  if (!scene_ || scene_->width != cfg_.width || scene_->height != cfg_.height) {
    throw ShapeError("scene does not match the retina configuration");
  }
  retina_sense(cfg_, *scene_, pos_);  // validates the start position
}

SensoryInput RetinaWorld::sense() const {
  auto fields = retina_sense(cfg_, *scene_, pos_);
  SensoryInput s;
  s.values.reserve(sensory_dim());
  for (const auto& f : fields) s.values.insert(s.values.end(), f.values.begin(), f.values.end());
  return s;
}

MotorState RetinaWorld::motor() const {
  return {static_cast<std::size_t>(pos_.y) * cfg_.width + static_cast<std::size_t>(pos_.x)};
}

bool RetinaWorld::apply(MotorDelta d) {
  auto r = retina_saccade(cfg_, pos_, d);
  pos_ = r.pos;
  return !r.clamped;
}

Cell retina_random_position(const RetinaWorldConfig& cfg, Rng& rng) {
  return {static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(max_x(cfg) + 1))),
          static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(max_y(cfg) + 1)))};
}

}  // namespace smc
