#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace helix {

// Reproducible generator: std::mt19937_64 (fully specified by the standard)
// with a bounded draw that does not depend on the library's distribution
// implementations.
class Rng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). Rejection sampling on the low end of the
  // 64-bit range removes modulo bias. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace helix
