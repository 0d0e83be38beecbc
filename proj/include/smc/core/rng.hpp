#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace smc {

// Seeded pseudo-random stream. All randomness in the library flows through this
// type so that runs are reproducible bit-for-bit across platforms: the bounded
// integer and real draws are implemented here instead of relying on the
// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream derived from a run seed and a stream name. Adding a new
  // named consumer never perturbs the draws of existing ones.
  static Rng stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform real in [0, 1) with 53 random bits.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace smc
