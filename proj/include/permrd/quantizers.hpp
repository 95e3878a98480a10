#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "permrd/log_base.hpp"
#include "permrd/metrics.hpp"
#include "permrd/permutation.hpp"

namespace permrd {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// ---------------------------------------------------------------------------
// Sorting-subsequences code

/// Sorts the first k consecutive length-m blocks of a permutation of size n.
struct BlockSortCode {
  std::int64_t n;
  std::int64_t k;
  std::int64_t m;

  /// Throws Error(invalid_parameter) unless 2 <= m <= n, k >= 1, k*m <= n.
  static BlockSortCode make(std::int64_t n, std::int64_t k, std::int64_t m);

  friend bool operator==(const BlockSortCode&, const BlockSortCode&) = default;
};

/// Codeword of `sigma`: each block sigma[i*m+1 .. (i+1)*m], i < k, sorted
/// ascending; the tail is copied.
Permutation block_sort_encode(const Permutation& sigma, const BlockSortCode& code);

/// inverse(block_sort_encode(inverse(sigma))): the codebook used for the
/// footrule and Chebyshev spaces. Each codeword moves items by at most m - 1
/// positions within one block.
Permutation block_sort_encode_inverse_domain(const Permutation& sigma, const BlockSortCode& code);

/// k log m!, the log ratio between n! and the codebook size n!/m!^k.
double delta_log_size(const BlockSortCode& code, LogBase base = LogBase::bits);

/// log(n!/m!^k).
double log_codebook_size(const BlockSortCode& code, LogBase base = LogBase::bits);

enum class DistortionMode { worst, average };

std::string_view to_string(DistortionMode mode) noexcept;
DistortionMode parse_distortion_mode(std::string_view name);

/// Distortion of the block code under `metric`:
///   tau        worst k m(m-1)/2,   average k m(m-1)/4
///   footrule   worst k floor(m^2/2), average k(m^2-1)/3
///   chebyshev  m - 1 in both modes (the worst case also bounds the mean)
/// Kendall uses the direct-domain encoder, footrule and Chebyshev the
/// inverse-domain one. inversion_l1 is not served by block codes and throws
/// Error(unsupported_combination).
Rational block_sort_distortion_bound(const BlockSortCode& code, Metric metric,
                                     DistortionMode mode);

/// Encoder matching `metric` as documented above.
Permutation block_sort_encode_for(Metric metric, const Permutation& sigma,
                                  const BlockSortCode& code);

// ---------------------------------------------------------------------------
// Component-wise scalar quantization of inversion vectors

/// Level counts m_2..m_n, one per inversion-vector coordinate; coordinate k
/// takes values in [0:k-1].
class ScalarQuantizerSpec {
 public:
  /// `levels[i]` is m_{i+2}. Throws Error(invalid_parameter) unless
  /// 1 <= m_k <= k, and Error(degenerate_size) if `levels` is empty.
  static ScalarQuantizerSpec make(std::vector<std::int64_t> levels);

  /// m_k = k everywhere: the lossless spec for S_n.
  static ScalarQuantizerSpec lossless(std::int64_t n);

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(levels_.size()) + 1; }

  /// m_k for 2 <= k <= n.
  std::int64_t level(std::int64_t k) const { return levels_[k - 2]; }
  const std::vector<std::int64_t>& levels() const noexcept { return levels_; }

  friend bool operator==(const ScalarQuantizerSpec&, const ScalarQuantizerSpec&) = default;

 private:
  explicit ScalarQuantizerSpec(std::vector<std::int64_t> levels) : levels_(std::move(levels)) {}

  std::vector<std::int64_t> levels_;
};

/// Nearest reproduction point for `value` in [0:k-1] quantized with m cells.
/// Cells are contiguous and balanced (the k mod m larger cells come first);
/// each reproduction point is its cell's midpoint rounded down. Ties go to the
/// smaller point.
std::int64_t scalar_quantize_value(std::int64_t value, std::int64_t k, std::int64_t m);

/// Reproduction points of [0:k-1] with m cells, ascending.
std::vector<std::int64_t> scalar_reproduction_points(std::int64_t k, std::int64_t m);

/// Worst error of the grid above: ceil((ceil(k/m) - 1)/2).
std::int64_t scalar_error_bound(std::int64_t k, std::int64_t m);

/// The looser closed form ceil((k/m - 1)/2).
std::int64_t scalar_error_bound_loose(std::int64_t k, std::int64_t m);

/// Fewest levels giving per-coordinate error at most `d` on [0:k-1]:
/// ceil(k/(2d+1)), clamped to [1:k]. Fractional `d` is allowed.
std::int64_t levels_for_distortion(std::int64_t k, double d);

/// Quantizes every coordinate. Throws Error(size_mismatch) when the level list and
/// vector disagree on n.
InversionVector scalar_quantize_encode(const InversionVector& x, const ScalarQuantizerSpec& spec);

/// from_inversion_vector(scalar_quantize_encode(to_inversion_vector(sigma))).
Permutation scalar_quantize_permutation(const Permutation& sigma, const ScalarQuantizerSpec& spec);

/// Sum of log m_k.
double log_codebook_size(const ScalarQuantizerSpec& spec, LogBase base = LogBase::bits);

/// Sum over k of scalar_error_bound(k, m_k): the inversion-l1 worst case.
std::int64_t guaranteed_distortion(const ScalarQuantizerSpec& spec);

// ---------------------------------------------------------------------------
// Regimes and parameter schedules

enum class Regime { small, moderate, large };

std::string_view to_string(Regime regime) noexcept;
Regime parse_regime(std::string_view name);

/// Target distortion family. small: D_n = a n^delta; moderate: D_n =
/// n^(1+delta) (n^delta for Chebyshev); large: D_n = b n^2.
struct RegimeParams {
  Regime regime;
  double a = 0.0;
  double delta = 0.0;
  double b = 0.0;

  static RegimeParams small(double a, double delta);
  static RegimeParams moderate(double delta);
  static RegimeParams large(double b);

  /// Throws Error(invalid_parameter) when a field of the declared regime is
  /// out of range or a field of another regime is set.
  void validate() const;
};

double target_distortion(Metric space, std::int64_t n, const RegimeParams& params);

/// A parameter choice from `schedule`, ready to encode.
struct ScheduledCode {
  Metric space;
  DistortionMode mode;
  RegimeParams params;
  std::int64_t n;
  double target;
  std::variant<BlockSortCode, ScalarQuantizerSpec> code;
  /// Distortion the construction guarantees in `mode`.
  double guaranteed;
  /// Number of level increments applied on top of the closed-form scalar
  /// levels so that `guaranteed <= target` (0 when the formula already fits).
  std::int64_t budget_repairs = 0;

  Permutation encode(const Permutation& sigma) const;
  double log_codebook_size(LogBase base = LogBase::bits) const;
  double rate() const;
  bool is_block_code() const noexcept { return code.index() == 0; }
};

/// Picks quantizer parameters for `space` at size n. Moderate regime works
/// for all four spaces; small and large only for tau and inversion_l1.
/// Throws Error(unsupported_combination) otherwise and
/// Error(invalid_parameter) when n is too small for the regime.
ScheduledCode schedule(Metric space, std::int64_t n, const RegimeParams& params,
                       DistortionMode mode = DistortionMode::worst);

/// Raises levels of `spec` one error step at a time, always on the
/// coordinate with the largest error bound (largest k on ties), until
/// guaranteed_distortion(spec) <= budget. Returns the number of steps.
std::int64_t tighten_to_budget(ScalarQuantizerSpec& spec, double budget);

// ---------------------------------------------------------------------------
// Strided subsequence code showing l1 and Chebyshev codes are not
// interchangeable.

/// Works on n' = floor(n/m)*m with m = ceil(n^delta). Item sets are
/// I_j = {(j-1)m+2, ..., jm+1} for j < k and I_k = {(k-1)m+2, ..., n', 1}.
/// Encoding sorts, within each I_j, the positions those items occupy, i.e.
/// it sorts the index subsequences of the inverse permutation.
class StridedSortCode {
 public:
  /// Throws Error(invalid_parameter) when m < 2 or fewer than 2 blocks fit.
  StridedSortCode(std::int64_t n, double delta);

  std::int64_t requested_n() const noexcept { return requested_n_; }
  std::int64_t n() const noexcept { return n_; }
  std::int64_t k() const noexcept { return k_; }
  std::int64_t m() const noexcept { return m_; }
  bool adjusted() const noexcept { return n_ != requested_n_; }

  /// Members of I_j (1 <= j <= k) in increasing order.
  std::vector<std::int64_t> index_set(std::int64_t j) const;

  /// Requires sigma.size() == n().
  Permutation encode(const Permutation& sigma) const;

 private:
  std::int64_t requested_n_;
  std::int64_t n_;
  std::int64_t k_;
  std::int64_t m_;
};

}  // namespace permrd
