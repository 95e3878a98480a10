#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "permrd/log_base.hpp"
#include "permrd/metrics.hpp"
#include "permrd/quantizers.hpp"

namespace permrd {

using BigInt = boost::multiprecision::cpp_int;

/// K_n(k), the number of permutations of n with exactly k inversions, for
/// every k in [0, n(n-1)/2]. Built as the coefficient list of
/// prod_{i=1}^{n-1} (1 + z + ... + z^i) in O(n * n(n-1)/2) big-integer adds.
class MahonianTable {
 public:
  explicit MahonianTable(std::int64_t n);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t max_inversions() const noexcept { return n_ * (n_ - 1) / 2; }

  /// K_n(k); 0 outside [0, n(n-1)/2].
  BigInt count(std::int64_t k) const;

  /// T_n(D) = sum_{k <= D} K_n(k). Throws Error(invalid_parameter) when D is
  /// outside [0, n(n-1)/2].
  BigInt cumulative(std::int64_t d) const;

  const std::vector<BigInt>& counts() const noexcept { return counts_; }

 private:
  std::int64_t n_;
  std::vector<BigInt> counts_;
  std::vector<BigInt> prefix_;
};

/// Convenience wrappers that build a table per call.
BigInt mahonian(std::int64_t n, std::int64_t k);
BigInt cumulative_T(std::int64_t n, std::int64_t d);

/// K_n(k) row by row from K_r(j) = K_r(j-1) + K_{r-1}(j) - K_{r-1}(j-r), which
/// is the two-term recurrence whenever j < r. Independent of MahonianTable.
BigInt mahonian_by_recurrence(std::int64_t n, std::int64_t k);

BigInt binomial(std::int64_t n, std::int64_t k);
BigInt factorial(std::int64_t n);

/// log of a positive big integer, in `base`.
double log_big(const BigInt& value, LogBase base = LogBase::bits);

inline constexpr std::int64_t kDefaultEnumerationLimit = 8;

/// |{pi : d(pi, center) <= D}| by enumerating S_n. Throws
/// Error(limit_exceeded) when n > limit.
BigInt ball_brute(Metric metric, const Permutation& center, std::int64_t d,
                  std::int64_t limit = kDefaultEnumerationLimit);

/// Largest ball over all centers, by enumeration of S_n x S_n.
BigInt max_ball_brute(Metric metric, std::int64_t n, std::int64_t d,
                      std::int64_t limit = 6);

// Upper bounds. Each exact bound is returned both as a big integer and in the
// log domain; the leading-order regime forms drop unspecified remainders.

/// C(n+D-1, D), bounding the Kendall ball for 0 <= D <= n.
BigInt kendall_ball_bound(std::int64_t n, std::int64_t d);

/// 2^min(n,D) C(n+D, D), bounding inversion-l1 balls for 0 <= D <= n(n-1)/2.
BigInt inversion_l1_ball_bound(std::int64_t n, std::int64_t d);

/// C(n+k-2, k), bounding K_n(k) for 1 <= k < n.
BigInt mahonian_binomial_bound(std::int64_t n, std::int64_t k);

/// log of 2^{n(1+c) H(1/(1+c))} / sqrt(2 pi n c/(1+c)) with c = k/n, k >= 1.
double mahonian_entropy_bound_log(std::int64_t n, std::int64_t k, LogBase base = LogBase::bits);

struct LogBound {
  double value;
  /// True when an O(.) remainder of unknown constant was dropped.
  bool leading_order;
};

/// Leading-order log ball size bound for tau or inversion_l1 under `params`:
///   small, delta < 1:  a(1-delta) n^delta log n
///   small, delta = 1:  n log((1+a)^(1+a)/a^a)       (tau)
///                      n (2 + log((1+a)^(1+a)/a^a)) (inversion_l1)
///   moderate:          delta n log n
///   large (D = b n(n-1)): n log(2 b e n)
LogBound regime_ball_bound(Metric space, std::int64_t n, const RegimeParams& params,
                           LogBase base = LogBase::bits);

}  // namespace permrd
