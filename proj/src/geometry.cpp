#include "permrd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "permrd/error.hpp"

namespace permrd {

MahonianTable::MahonianTable(std::int64_t n) : n_(n) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "Mahonian table needs n >= 1");
  const std::int64_t top = max_inversions();
  counts_.assign(top + 1, BigInt(0));
  counts_[0] = 1;
  std::vector<BigInt> next(top + 1);
  std::int64_t reach = 0;
  for (std::int64_t i = 1; i < n; ++i) {
    // Multiply by 1 + z + ... + z^i with a sliding window sum.
    reach += i;
    BigInt window = 0;
    for (std::int64_t k = 0; k <= reach; ++k) {
      window += counts_[k];
      if (k - i - 1 >= 0) window -= counts_[k - i - 1];
      next[k] = window;
    }
    for (std::int64_t k = 0; k <= reach; ++k) counts_[k] = next[k];
  }
  prefix_.resize(top + 1);
  BigInt running = 0;
  for (std::int64_t k = 0; k <= top; ++k) {
    running += counts_[k];
    prefix_[k] = running;
  }
}

BigInt MahonianTable::count(std::int64_t k) const {
  if (k < 0 || k > max_inversions()) return 0;
  return counts_[k];
}

BigInt MahonianTable::cumulative(std::int64_t d) const {
  if (d < 0 || d > max_inversions()) {
    throw Error(ErrorKind::invalid_parameter,
                "radius " + std::to_string(d) + " outside [0, " +
                    std::to_string(max_inversions()) + "]");
  }
  return prefix_[d];
}

BigInt mahonian(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 1 || k > n * (n - 1) / 2) return 0;
  return MahonianTable(n).count(k);
}

BigInt cumulative_T(std::int64_t n, std::int64_t d) { return MahonianTable(n).cumulative(d); }

BigInt mahonian_by_recurrence(std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 0 || k > n * (n - 1) / 2) return 0;
  // row[j] holds K_r(j) for the current r, starting from K_1 = [1].
  std::vector<BigInt> row(k + 1, BigInt(0));
  row[0] = 1;
  for (std::int64_t r = 2; r <= n; ++r) {
    const std::vector<BigInt> previous = row;
    for (std::int64_t j = 1; j <= k; ++j) {
      row[j] = row[j - 1] + previous[j];
      if (j - r >= 0) row[j] -= previous[j - r];
    }
  }
  return row[k];
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt factorial(std::int64_t n) {
  BigInt result = 1;
  for (std::int64_t i = 2; i <= n; ++i) result *= i;
  return result;
}

double log_big(const BigInt& value, LogBase base) {
  if (value <= 0) throw Error(ErrorKind::invalid_parameter, "log of a non-positive integer");
  const auto top = static_cast<std::int64_t>(boost::multiprecision::msb(value));
  const std::int64_t shift = std::max<std::int64_t>(0, top - 60);
  const BigInt mantissa = value >> shift;
  const double nats =
      std::log(mantissa.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
  return from_nats(nats, base);
}

namespace {

template <typename Visit>
void for_each_permutation(std::int64_t n, Visit&& visit) {
  std::vector<Permutation::value_type> values(n);
  for (std::int64_t i = 0; i < n; ++i) values[i] = static_cast<Permutation::value_type>(i + 1);
  do {
    visit(Permutation::adopt_unchecked(values));
  } while (std::next_permutation(values.begin(), values.end()));
}

void check_limit(std::int64_t n, std::int64_t limit) {
  if (n > limit) {
    throw Error(ErrorKind::limit_exceeded, "enumeration of S_" + std::to_string(n) +
                                               " exceeds the limit n <= " +
                                               std::to_string(limit));
  }
}

}  // namespace

BigInt ball_brute(Metric metric, const Permutation& center, std::int64_t d, std::int64_t limit) {
  const auto n = static_cast<std::int64_t>(center.size());
  check_limit(n, limit);
  std::int64_t count = 0;
  for_each_permutation(n, [&](const Permutation& pi) {
    if (distance(metric, pi, center) <= d) ++count;
  });
  return count;
}

BigInt max_ball_brute(Metric metric, std::int64_t n, std::int64_t d, std::int64_t limit) {
  check_limit(n, limit);
  BigInt best = 0;
  for_each_permutation(n, [&](const Permutation& center) {
    best = std::max(best, ball_brute(metric, center, d, limit));
  });
  return best;
}

BigInt kendall_ball_bound(std::int64_t n, std::int64_t d) {
  if (d < 0 || d > n) throw Error(ErrorKind::invalid_parameter, "Kendall ball bound needs 0 <= D <= n");
  return binomial(n + d - 1, d);
}

BigInt inversion_l1_ball_bound(std::int64_t n, std::int64_t d) {
  if (d < 0 || d > n * (n - 1) / 2) {
    throw Error(ErrorKind::invalid_parameter, "inversion-l1 ball bound needs 0 <= D <= n(n-1)/2");
  }
  return (BigInt(1) << static_cast<unsigned>(std::min(n, d))) * binomial(n + d, d);
}

BigInt mahonian_binomial_bound(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 2) throw Error(ErrorKind::invalid_parameter, "need n >= 2 and k >= 0");
  return binomial(n + k - 2, k);
}

double mahonian_entropy_bound_log(std::int64_t n, std::int64_t k, LogBase base) {
  if (n < 1 || k < 1) throw Error(ErrorKind::invalid_parameter, "need n >= 1 and k >= 1");
  const double nd = static_cast<double>(n);
  const double c = static_cast<double>(k) / nd;
  const double exponent_bits = nd * (1.0 + c) * binary_entropy(1.0 / (1.0 + c), LogBase::bits);
  const double nats = exponent_bits * std::numbers::ln2 -
                      0.5 * std::log(2.0 * std::numbers::pi * nd * c / (1.0 + c));
  return from_nats(nats, base);
}

LogBound regime_ball_bound(Metric space, std::int64_t n, const RegimeParams& params,
                           LogBase base) {
  params.validate();
  if (space != Metric::kendall_tau && space != Metric::inversion_l1) {
    throw Error(ErrorKind::unsupported_combination,
                "regime ball bounds are given for tau and invl1 only");
  }
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  double nats = 0.0;
  switch (params.regime) {
    case Regime::small: {
      const double a = params.a;
      if (params.delta < 1.0) {
        nats = a * (1.0 - params.delta) * std::pow(nd, params.delta) * log_n;
      } else {
        const double shape = (1.0 + a) * std::log1p(a) - a * std::log(a);
        nats = nd * shape;
        if (space == Metric::inversion_l1) nats += nd * 2.0 * std::numbers::ln2;
      }
      break;
    }
    case Regime::moderate: nats = params.delta * nd * log_n; break;
    case Regime::large: nats = nd * std::log(2.0 * params.b * std::numbers::e * nd); break;
  }
  return {from_nats(nats, base), true};
}

}  // namespace permrd
