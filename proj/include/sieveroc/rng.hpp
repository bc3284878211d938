#pragma once

#include <cstdint>

namespace sieveroc {

// Counter-free splitmix64 generator.  Cheap to construct, so independent
// streams are made on demand from (seed, stream) pairs; replicate k of a
// bootstrap or Monte Carlo run always sees the same stream regardless of
// how work is scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kGolden)) {}

  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed ^ kGolden) + kGolden * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Uniform index in {0, ..., n-1}.
  int next_index(int n) {
    return static_cast<int>(next_double() * static_cast<double>(n));
  }

  // Stable 64-bit sub-seed for nested generators (one dataset per replicate,
  // one stream per dataset, ...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(mix(seed ^ kGolden) + kGolden * (index + 1));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace sieveroc
