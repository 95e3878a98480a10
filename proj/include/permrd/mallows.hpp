#pragma once

#include <cstdint>
#include <optional>

#include "permrd/log_base.hpp"
#include "permrd/permutation.hpp"
#include "permrd/random.hpp"

namespace permrd {

/// Distribution on S_n with P(sigma) proportional to q^{d_tau(sigma, reference)}.
class MallowsModel {
 public:
  /// Throws Error(invalid_parameter) unless q > 0 and finite.
  MallowsModel(double q, Permutation reference);

  /// Model centred at the identity of S_n.
  static MallowsModel centred(double q, std::size_t n);

  double q() const noexcept { return q_; }
  const Permutation& reference() const noexcept { return reference_; }
  std::size_t n() const noexcept { return reference_.size(); }

 private:
  double q_;
  Permutation reference_;
};

/// log [n]_q! = sum_{i=1}^n log [i]_q, the normalizer of every model with
/// parameter q on S_n.
double log_q_factorial(std::int64_t n, double q, LogBase base = LogBase::bits);

double log_pmf(const Permutation& sigma, const MallowsModel& model, LogBase base = LogBase::bits);
double pmf(const Permutation& sigma, const MallowsModel& model);

/// Draw from {0, ..., upper} with P(j) proportional to q^j, using one uniform.
std::int64_t sample_truncated_geometric(double q, std::int64_t upper, RandomStream& rng);

/// Insertion vector of the repeated insertion process: a_i = j with
/// probability q^{i-j} / (1 + q + ... + q^{i-1}).
InsertionVector sample_insertion_vector(std::size_t n, double q, RandomStream& rng);

/// One draw from the model: sample insertion positions, map them to an
/// inversion vector, decode, and relabel by the reference.
Permutation sample_rim(const MallowsModel& model, RandomStream& rng);

struct EntropyResult {
  LogBase base;
  double total;
  /// H_b(q)/(1-q) (with q replaced by 1/q when q > 1); absent for q = 1.
  std::optional<double> linear_coefficient;
  /// linear_coefficient * n - total; absent for q = 1.
  std::optional<double> remainder;
};

/// Entropy of the model on S_n, summing the entropies of the independent
/// truncated-geometric inversion-vector coordinates. Equal for q and 1/q.
EntropyResult entropy(std::int64_t n, double q, LogBase base = LogBase::bits);

/// E(c, q) = (1+c) H(1/(1+c)) - c log2(1/q), in bits. Needs c > 0, 0 < q < 1.
double typical_exponent(double c, double q);

/// Smallest c with E(c, q) <= -epsilon, found by bisection to `tolerance`
/// beyond the maximiser c = q/(1-q). Throws Error(invalid_parameter) for
/// q outside (0, 1).
double typical_radius_constant(double q, double epsilon = 0.05, double tolerance = 1e-9);

}  // namespace permrd
