#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace feedsim {

/// Derives an independent sub-seed from a root seed and a label.
///
/// seed = splitmix64(splitmix64(root ^ fnv1a64(label)) + index). Every random
/// stream in the simulator is obtained this way, so a component can be re-run
/// in isolation from the root seed alone.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index = 0);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random stream. The distributions are implemented here rather than
/// taken from <random>, whose outputs differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, one variate per call).
  double normal();
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace feedsim
