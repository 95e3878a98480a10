#pragma once

#include <cstdint>
#include <string_view>

#include "permrd/permutation.hpp"

namespace permrd {

/// All four distortion measures are integer valued on S_n.
using Distance = std::int64_t;

enum class Metric {
  footrule,      // l1 between permutation vectors
  chebyshev,     // l-infinity between permutation vectors
  kendall_tau,   // adjacent transpositions, equivalently discordant value pairs
  inversion_l1,  // l1 between inversion vectors
};

std::string_view to_string(Metric metric) noexcept;

/// Accepts the canonical names above plus the short forms used on the command
/// line: l1, linf, tau, invl1 (and a few spellings of each).
Metric parse_metric(std::string_view name);

/// All functions below throw Error(size_mismatch) for unequal sizes.
Distance footrule(const Permutation& a, const Permutation& b);
Distance chebyshev(const Permutation& a, const Permutation& b);

/// Inversion count of inverse(b) o a, in O(n log n). Symmetric.
Distance kendall_tau(const Permutation& a, const Permutation& b);

/// Requires n >= 2 (Error(degenerate_size) otherwise).
Distance inversion_l1(const Permutation& a, const Permutation& b);

Distance distance(Metric metric, const Permutation& a, const Permutation& b);

/// Largest value `metric` attains on S_n.
Distance max_distance(Metric metric, std::int64_t n);

}  // namespace permrd
