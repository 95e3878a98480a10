#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "permrd/permutation.hpp"

namespace permrd {

/// Seeded pseudo-random stream. Streams are keyed by (seed, task): the same
/// pair always yields the same sequence, and different tasks give independent
/// looking streams, so each trial or worker can own one without coordination.
///
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t task);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, bound), bound >= 1, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Uniform element of S_n (Fisher-Yates).
Permutation random_permutation(std::size_t n, RandomStream& rng);

}  // namespace permrd
