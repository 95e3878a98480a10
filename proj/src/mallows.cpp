#include "permrd/mallows.hpp"

#include <cmath>
#include <string>

#include "permrd/error.hpp"
#include "permrd/metrics.hpp"

namespace permrd {

namespace {

void require_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::invalid_parameter, "Mallows parameter q must be positive and finite");
  }
}

// log [i]_q in nats for 0 < q < 1.
double log_q_number_below_one(std::int64_t i, double q) {
  const double lq = std::log(q);
  return std::log(-std::expm1(static_cast<double>(i) * lq)) - std::log(-std::expm1(lq));
}

double log_q_number(std::int64_t i, double q) {
  if (q == 1.0) return std::log(static_cast<double>(i));
  if (q < 1.0) return log_q_number_below_one(i, q);
  // [i]_q = q^{i-1} [i]_{1/q}.
  return static_cast<double>(i - 1) * std::log(q) + log_q_number_below_one(i, 1.0 / q);
}

// Entropy in nats of the geometric law on {0, ..., k} with ratio r < 1.
double truncated_geometric_entropy(std::int64_t k, double r) {
  const double full = -std::expm1(static_cast<double>(k + 1) * std::log(r));  // 1 - r^{k+1}
  return binary_entropy(r, LogBase::nats) / (1.0 - r) -
         binary_entropy(full, LogBase::nats) / full;
}

}  // namespace

MallowsModel::MallowsModel(double q, Permutation reference)
    : q_(q), reference_(std::move(reference)) {
  require_q(q);
}

MallowsModel MallowsModel::centred(double q, std::size_t n) {
  return MallowsModel(q, Permutation::identity(n));
}

double log_q_factorial(std::int64_t n, double q, LogBase base) {
  require_q(q);
  if (n < 0) throw Error(ErrorKind::invalid_parameter, "n must be non-negative");
  double total = 0.0;
  for (std::int64_t i = 2; i <= n; ++i) total += log_q_number(i, q);
  return from_nats(total, base);
}

double log_pmf(const Permutation& sigma, const MallowsModel& model, LogBase base) {
  const Distance d = kendall_tau(sigma, model.reference());
  const double nats = static_cast<double>(d) * std::log(model.q()) -
                      log_q_factorial(static_cast<std::int64_t>(model.n()), model.q(),
                                      LogBase::nats);
  return from_nats(nats, base);
}

double pmf(const Permutation& sigma, const MallowsModel& model) {
  return std::exp(log_pmf(sigma, model, LogBase::nats));
}

std::int64_t sample_truncated_geometric(double q, std::int64_t upper, RandomStream& rng) {
  require_q(q);
  if (upper < 0) throw Error(ErrorKind::invalid_parameter, "upper must be non-negative");
  if (upper == 0) return 0;
  if (q == 1.0) return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(upper) + 1));
  if (q > 1.0) return upper - sample_truncated_geometric(1.0 / q, upper, rng);
  const double log_q = std::log(q);
  // CDF F(j) = (1 - q^{j+1}) / (1 - q^{upper+1}); invert with a stable form.
  const double mass = -std::expm1(static_cast<double>(upper + 1) * log_q);
  const double u = rng.uniform01();
  const double x = std::log1p(-u * mass) / log_q;
  if (!(x >= 0.0)) return 0;
  const double j = std::floor(x);
  return j >= static_cast<double>(upper) ? upper : static_cast<std::int64_t>(j);
}

InsertionVector sample_insertion_vector(std::size_t n, double q, RandomStream& rng) {
  std::vector<std::int64_t> positions(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto ii = static_cast<std::int64_t>(i);
    // Inserting at j leaves i - j earlier items behind item i.
    positions[i - 1] = ii - sample_truncated_geometric(q, ii - 1, rng);
  }
  return InsertionVector::from_entries(positions);
}

Permutation sample_rim(const MallowsModel& model, RandomStream& rng) {
  const std::size_t n = model.n();
  if (n == 1) return model.reference();
  const auto insertion = sample_insertion_vector(n, model.q(), rng);
  const auto centred = from_inversion_vector(insertion_to_extended_inversion(insertion));
  return compose(model.reference(), centred);
}

EntropyResult entropy(std::int64_t n, double q, LogBase base) {
  require_q(q);
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "n must be positive");
  if (q == 1.0) return {base, log_factorial(n, base), std::nullopt, std::nullopt};
  const double r = q < 1.0 ? q : 1.0 / q;
  double total = 0.0;
  for (std::int64_t k = 1; k < n; ++k) total += truncated_geometric_entropy(k, r);
  const double linear = binary_entropy(r, LogBase::nats) / (1.0 - r);
  const double remainder = linear * static_cast<double>(n) - total;
  return {base, from_nats(total, base), from_nats(linear, base), from_nats(remainder, base)};
}

double typical_exponent(double c, double q) {
  if (!(c > 0.0)) throw Error(ErrorKind::invalid_parameter, "typical exponent needs c > 0");
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "typical exponent needs 0 < q < 1");
  }
  return (1.0 + c) * binary_entropy(1.0 / (1.0 + c), LogBase::bits) + c * std::log2(q);
}

double typical_radius_constant(double q, double epsilon, double tolerance) {
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::invalid_parameter,
                "the typical radius is defined for 0 < q < 1 (got " + std::to_string(q) + ")");
  }
  if (!(epsilon > 0.0) || !(tolerance > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "epsilon and tolerance must be positive");
  }
  // E is concave with its maximum at q/(1-q) and falls without bound after it.
  double lo = q / (1.0 - q);
  double hi = 2.0 * lo + 1.0;
  while (typical_exponent(hi, q) > -epsilon) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (typical_exponent(mid, q) <= -epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace permrd
