#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace safe {

/// Portable seeded generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std:: distributions are implementation-defined, so every
/// transform on top of the raw 64-bit words is spelled out here:
///  - uniform01: top 53 bits scaled by 2^-53, range [0, 1)
///  - below(n): rejection sampling on the largest multiple of n
///  - normal: Marsaglia polar method, second variate cached
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t below(std::uint64_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Deterministic sub-seed for a named pipeline stage (SplitMix64 finalizer
/// over the seed mixed with an FNV-1a hash of the stage name).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

}  // namespace safe
