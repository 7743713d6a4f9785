#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace irgroups {

/// mt19937_64 with hand-written conversions. The engine's output sequence is
/// fixed by the C++ standard but the <random> distributions are not, so the
/// draws below are what makes runs reproducible across toolchains.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64; u01 = (x >> 11) * 2^-53; bounded = Lemire";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n), n > 0, unbiased.
  std::uint64_t below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<__uint128_t>(engine_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace irgroups
