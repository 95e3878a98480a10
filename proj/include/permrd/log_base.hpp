#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace permrd {

enum class LogBase { bits, nats };

constexpr std::string_view to_string(LogBase base) noexcept {
  return base == LogBase::bits ? "bits" : "nats";
}

/// Converts a natural-log quantity into `base`.
inline double from_nats(double nats, LogBase base) noexcept {
  return base == LogBase::bits ? nats / std::numbers::ln2 : nats;
}

inline double to_nats(double value, LogBase base) noexcept {
  return base == LogBase::bits ? value * std::numbers::ln2 : value;
}

inline double log_in(double x, LogBase base) noexcept { return from_nats(std::log(x), base); }

/// log n! via log-gamma; exact enough for every n this library handles.
inline double log_factorial(std::int64_t n, LogBase base = LogBase::bits) noexcept {
  return from_nats(std::lgamma(static_cast<double>(n) + 1.0), base);
}

/// Binary entropy -p log p - (1-p) log(1-p), with H(0) = H(1) = 0.
inline double binary_entropy(double p, LogBase base = LogBase::bits) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return from_nats(-p * std::log(p) - (1.0 - p) * std::log1p(-p), base);
}

}  // namespace permrd
