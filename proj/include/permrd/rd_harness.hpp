#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "permrd/log_base.hpp"
#include "permrd/metrics.hpp"
#include "permrd/quantizers.hpp"

namespace permrd {

// ---------------------------------------------------------------------------
// Theoretical calculators

struct RateResult {
  /// Limit rate in [0, 1].
  double rate;
  /// Exponent inferred from (n, D); absent when D <= 0.
  std::optional<double> inferred_delta;
  std::optional<double> r_lower;
  std::optional<double> r_upper;
};

/// Diagnostic: infers delta = log D / log n - 1 (log D / log n for
/// Chebyshev) from a single point and maps it to the limit rate 1 - delta,
/// clamped to [0, 1]. D <= 0 means lossless (rate 1).
RateResult rate_function(Metric space, std::int64_t n, double d);

/// Limit rate for declared regime parameters: small 1, large 0, moderate
/// 1 - delta.
double limit_rate(const RegimeParams& params);

struct HigherOrderBounds {
  double lower;
  double upper;
  /// Always true: O(.) remainders of unknown constant are dropped.
  bool leading_order = true;
};

/// Leading terms of the bounds on r(D_n) = log|C| - log n! * R for tau and
/// inversion_l1 in the small and large regimes. Throws
/// Error(unsupported_combination) for other spaces or the moderate regime.
HigherOrderBounds higher_order_bounds(Metric space, std::int64_t n, const RegimeParams& params,
                                      LogBase base = LogBase::bits);

/// r(D_n) achieved by a scheduled code: log|C| - log n! * limit_rate.
double achieved_higher_order(const ScheduledCode& code, LogBase base = LogBase::bits);

struct MomentReference {
  std::optional<double> mean;
  std::optional<double> variance;
  /// True when `variance` is a leading-order expression.
  bool variance_leading_order = false;
  std::optional<double> mean_lower;
  std::optional<double> mean_upper;
  std::optional<double> variance_upper;
};

/// Mean and variance of d(pi, sigma) for uniform sigma, where known:
///   tau        mean n(n-1)/4, variance n(2n+5)(n-1)/72
///   footrule   mean (n^2-1)/3, variance ~ 2n^3/45
///   invl1      mean > n(n-1)/8, variance < (n+1)(n+2)(2n+3)/6
///   chebyshev  mean < n
MomentReference moment_reference(Metric metric, std::int64_t n);

struct MomentEstimate {
  double mean;
  double variance;  // unbiased
  std::int64_t samples;
};

/// Monte Carlo moments of d(pi, sigma) over independent uniform pairs.
MomentEstimate estimate_moments(Metric metric, std::int64_t n, std::int64_t samples,
                                std::uint64_t seed, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Relationships between the distances

struct ChainCheck {
  std::int64_t pairs = 0;
  /// n * cheb >= foot >= tau(inverses) >= foot / 2 failures.
  std::int64_t footrule_chain_violations = 0;
  /// invl1 <= tau failures.
  std::int64_t inversion_upper_violations = 0;
  /// tau <= (n-1) invl1 failures. This bound does not hold in general; the
  /// largest ratio tau / invl1 seen for n <= 6 is 2n - 3.
  std::int64_t inversion_lower_violations = 0;
  /// tau <= (2n-3) invl1 failures.
  std::int64_t inversion_relaxed_violations = 0;
};

/// Checks the deterministic chains on every ordered pair of S_n.
ChainCheck exhaustive_chain_check(std::int64_t n);

struct RelationshipReport {
  std::int64_t n = 0;
  std::int64_t samples = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  ChainCheck chain;
  /// Pairs with c1 * n * cheb > foot.
  std::int64_t c1_failures = 0;
  /// Pairs with c2 * tau > invl1.
  std::int64_t c2_failures = 0;

  double c1_rate() const { return static_cast<double>(c1_failures) / static_cast<double>(samples); }
  double c2_rate() const { return static_cast<double>(c2_failures) / static_cast<double>(samples); }
};

/// Samples independent uniform pairs, checks the deterministic chains on
/// each, and counts failures of the two high-probability lower bounds.
RelationshipReport relationship_tests(std::int64_t n, std::int64_t samples, std::uint64_t seed,
                                      double c1 = 0.3, double c2 = 0.45, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Experiments

enum class SchemeKind {
  scheduled,  // the regime schedule for the space
  strided,    // the strided subsequence code, on footrule or Chebyshev
};

struct ExperimentConfig {
  Metric space = Metric::kendall_tau;
  SchemeKind scheme = SchemeKind::scheduled;
  std::int64_t n = 100;
  RegimeParams params = RegimeParams::moderate(0.5);
  DistortionMode mode = DistortionMode::worst;
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  /// Draw sources from a Mallows model centred at the identity instead of
  /// uniformly.
  std::optional<double> mallows_q;
  std::size_t threads = 1;
};

inline constexpr std::int64_t kMaxExperimentSize = 10'000'000;

struct ExperimentRecord {
  std::string space;
  std::string scheme;
  std::string regime;
  std::string mode;
  std::int64_t n = 0;
  double delta = 0.0;
  double a = 0.0;
  double b = 0.0;
  double target_d = 0.0;
  double log2_codebook = 0.0;
  double bound_d = 0.0;
  std::int64_t worst_d = 0;
  double mean_d = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::string source;
  std::optional<double> q;
  double rate = 0.0;
  std::int64_t budget_repairs = 0;
};

/// Encodes `trials` sampled permutations and records the observed distortion.
/// Trial t uses RandomStream(seed, t), so results do not depend on `threads`.
ExperimentRecord run_experiment(const ExperimentConfig& config);

inline constexpr int kCsvSchemaVersion = 1;

/// Shortest round-tripping decimal form of `value`.
std::string format_double(double value);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ExperimentRecord& record);

/// Expands a JSON sweep description into experiment configurations. The
/// document holds an "experiments" array; in each entry the fields space, n,
/// delta, a, b and mode may be scalars or arrays and are expanded as a
/// cartesian product. Throws Error(parse_error) on malformed input.
std::vector<ExperimentConfig> parse_sweep(const std::string& json_text,
                                          std::size_t default_threads = 1);

}  // namespace permrd
