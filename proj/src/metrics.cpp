#include "permrd/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <string>

#include "permrd/error.hpp"

namespace permrd {

namespace {

void require_same_size(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::size_mismatch, "permutations have sizes " + std::to_string(a.size()) +
                                              " and " + std::to_string(b.size()));
  }
}

}  // namespace

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::footrule: return "footrule";
    case Metric::chebyshev: return "chebyshev";
    case Metric::kendall_tau: return "tau";
    case Metric::inversion_l1: return "invl1";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "footrule" || lower == "l1" || lower == "ell1" || lower == "spearman") {
    return Metric::footrule;
  }
  if (lower == "chebyshev" || lower == "linf" || lower == "ellinf" || lower == "l-inf") {
    return Metric::chebyshev;
  }
  if (lower == "tau" || lower == "kendall" || lower == "kendall_tau" || lower == "kendall-tau") {
    return Metric::kendall_tau;
  }
  if (lower == "invl1" || lower == "inv-l1" || lower == "inversion_l1" ||
      lower == "inversion-l1") {
    return Metric::inversion_l1;
  }
  throw Error(ErrorKind::parse_error, "unknown metric '" + std::string(name) + "'");
}

Distance footrule(const Permutation& a, const Permutation& b) {
  require_same_size(a, b);
  Distance total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += std::abs(static_cast<Distance>(a.values()[i]) - b.values()[i]);
  }
  return total;
}

Distance chebyshev(const Permutation& a, const Permutation& b) {
  require_same_size(a, b);
  Distance worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(static_cast<Distance>(a.values()[i]) - b.values()[i]));
  }
  return worst;
}

Distance kendall_tau(const Permutation& a, const Permutation& b) {
  require_same_size(a, b);
  return inversion_count(compose(inverse(b), a));
}

Distance inversion_l1(const Permutation& a, const Permutation& b) {
  require_same_size(a, b);
  const auto xa = to_inversion_vector(a);
  const auto xb = to_inversion_vector(b);
  Distance total = 0;
  for (std::size_t i = 0; i < xa.entries().size(); ++i) {
    total += std::abs(static_cast<Distance>(xa.entries()[i]) - xb.entries()[i]);
  }
  return total;
}

Distance distance(Metric metric, const Permutation& a, const Permutation& b) {
  switch (metric) {
    case Metric::footrule: return footrule(a, b);
    case Metric::chebyshev: return chebyshev(a, b);
    case Metric::kendall_tau: return kendall_tau(a, b);
    case Metric::inversion_l1: return inversion_l1(a, b);
  }
  throw Error(ErrorKind::invalid_parameter, "unknown metric");
}

Distance max_distance(Metric metric, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "n must be positive");
  switch (metric) {
    case Metric::footrule: return n * n / 2;
    case Metric::chebyshev: return n - 1;
    case Metric::kendall_tau:
    case Metric::inversion_l1: return n * (n - 1) / 2;
  }
  throw Error(ErrorKind::invalid_parameter, "unknown metric");
}

}  // namespace permrd
