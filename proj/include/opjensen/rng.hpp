#pragma once

#include <cstdint>
#include <random>

#include "opjensen/types.hpp"

namespace opjensen {

/// Seeded generator: mt19937_64 with hand-rolled output maps so that streams
/// are identical across platforms and builds. Independent substreams are
/// derived from (master seed, index), which is what keeps the parallel trial
/// loops deterministic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);
  /// Standard normal via Box-Muller.
  double normal();
  /// Complex with independent standard-normal parts.
  Complex cnormal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace opjensen
