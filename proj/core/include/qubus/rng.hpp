#pragma once

#include <cstdint>
#include <random>

namespace qubus {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// One named random stream. Streams with distinct (family, index) under the
/// same master seed are independent, so results do not depend on the order in
/// which streams are consumed.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t family, std::uint64_t index)
      : engine_(splitmix64(splitmix64(master_seed ^ splitmix64(family)) ^ splitmix64(index + 1))) {}

  /// Uniform on [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

 private:
  std::mt19937_64 engine_;
};

enum class StreamFamily : std::uint64_t { generation = 1, protocol = 2 };

}  // namespace qubus
