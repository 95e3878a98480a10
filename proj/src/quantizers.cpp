#include "permrd/quantizers.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <utility>

#include "permrd/error.hpp"

namespace permrd {

namespace {

// pow() of exact powers may land a hair below the integer; snap values that
// are integers up to floating noise before rounding.
double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

std::int64_t floor_i(double x) { return static_cast<std::int64_t>(std::floor(snap(x))); }
std::int64_t ceil_i(double x) { return static_cast<std::int64_t>(std::ceil(snap(x))); }

bool within(double value, double budget) { return value <= budget * (1.0 + 1e-12); }

std::vector<Permutation::value_type> copy_values(const Permutation& sigma) {
  return {sigma.values().begin(), sigma.values().end()};
}

void require_size(const Permutation& sigma, std::int64_t n) {
  if (static_cast<std::int64_t>(sigma.size()) != n) {
    throw Error(ErrorKind::size_mismatch, "permutation has size " + std::to_string(sigma.size()) +
                                              ", code expects " + std::to_string(n));
  }
}

}  // namespace

BlockSortCode BlockSortCode::make(std::int64_t n, std::int64_t k, std::int64_t m) {
  if (m < 2 || m > n || k < 1 || k * m > n) {
    throw Error(ErrorKind::invalid_parameter,
                "block code needs 2 <= m <= n, k >= 1 and k*m <= n (got n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
  return BlockSortCode{n, k, m};
}

Permutation block_sort_encode(const Permutation& sigma, const BlockSortCode& code) {
  require_size(sigma, code.n);
  auto values = copy_values(sigma);
  for (std::int64_t block = 0; block < code.k; ++block) {
    auto first = values.begin() + block * code.m;
    std::sort(first, first + code.m);
  }
  return Permutation::adopt_unchecked(std::move(values));
}

Permutation block_sort_encode_inverse_domain(const Permutation& sigma, const BlockSortCode& code) {
  return inverse(block_sort_encode(inverse(sigma), code));
}

double delta_log_size(const BlockSortCode& code, LogBase base) {
  return static_cast<double>(code.k) * log_factorial(code.m, base);
}

double log_codebook_size(const BlockSortCode& code, LogBase base) {
  return log_factorial(code.n, base) - delta_log_size(code, base);
}

std::string_view to_string(DistortionMode mode) noexcept {
  return mode == DistortionMode::worst ? "worst" : "average";
}

DistortionMode parse_distortion_mode(std::string_view name) {
  if (name == "worst") return DistortionMode::worst;
  if (name == "average" || name == "avg") return DistortionMode::average;
  throw Error(ErrorKind::parse_error, "unknown distortion mode '" + std::string(name) + "'");
}

Rational block_sort_distortion_bound(const BlockSortCode& code, Metric metric,
                                     DistortionMode mode) {
  const std::int64_t k = code.k;
  const std::int64_t m = code.m;
  const bool worst = mode == DistortionMode::worst;
  switch (metric) {
    case Metric::kendall_tau:
      return worst ? Rational(k * m * (m - 1), 2) : Rational(k * m * (m - 1), 4);
    case Metric::footrule:
      return worst ? Rational(k * (m * m / 2)) : Rational(k * (m * m - 1), 3);
    case Metric::chebyshev:
      return Rational(m - 1);
    case Metric::inversion_l1:
      break;
  }
  throw Error(ErrorKind::unsupported_combination,
              "block codes are not defined for the inversion-l1 space");
}

Permutation block_sort_encode_for(Metric metric, const Permutation& sigma,
                                  const BlockSortCode& code) {
  switch (metric) {
    case Metric::kendall_tau: return block_sort_encode(sigma, code);
    case Metric::footrule:
    case Metric::chebyshev: return block_sort_encode_inverse_domain(sigma, code);
    case Metric::inversion_l1: break;
  }
  throw Error(ErrorKind::unsupported_combination,
              "block codes are not defined for the inversion-l1 space");
}

ScalarQuantizerSpec ScalarQuantizerSpec::make(std::vector<std::int64_t> levels) {
  if (levels.empty()) throw Error(ErrorKind::degenerate_size, "scalar spec needs n >= 2");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i + 2);
    if (levels[i] < 1 || levels[i] > k) {
      throw Error(ErrorKind::invalid_parameter,
                  "m_" + std::to_string(k) + " = " + std::to_string(levels[i]) +
                      " is outside [1:" + std::to_string(k) + "]");
    }
  }
  return ScalarQuantizerSpec(std::move(levels));
}

ScalarQuantizerSpec ScalarQuantizerSpec::lossless(std::int64_t n) {
  if (n < 2) throw Error(ErrorKind::degenerate_size, "scalar spec needs n >= 2");
  std::vector<std::int64_t> levels(n - 1);
  for (std::int64_t k = 2; k <= n; ++k) levels[k - 2] = k;
  return ScalarQuantizerSpec(std::move(levels));
}

namespace {

struct Cell {
  std::int64_t lo;
  std::int64_t size;
  std::int64_t point() const { return lo + (size - 1) / 2; }
};

Cell cell_at(std::int64_t index, std::int64_t k, std::int64_t m) {
  const std::int64_t q = k / m;
  const std::int64_t r = k % m;
  if (index < r) return {index * (q + 1), q + 1};
  return {r * (q + 1) + (index - r) * q, q};
}

std::int64_t cell_of(std::int64_t value, std::int64_t k, std::int64_t m) {
  const std::int64_t q = k / m;
  const std::int64_t r = k % m;
  const std::int64_t boundary = r * (q + 1);
  if (value < boundary) return value / (q + 1);
  return r + (value - boundary) / q;
}

}  // namespace

std::int64_t scalar_quantize_value(std::int64_t value, std::int64_t k, std::int64_t m) {
  if (k < 1 || m < 1 || m > k || value < 0 || value >= k) {
    throw Error(ErrorKind::invalid_parameter, "scalar quantizer input out of range");
  }
  const std::int64_t home = cell_of(value, k, m);
  std::int64_t best = cell_at(home, k, m).point();
  for (std::int64_t c = std::max<std::int64_t>(0, home - 1); c <= std::min(m - 1, home + 1);
       ++c) {
    const std::int64_t p = cell_at(c, k, m).point();
    const std::int64_t d = std::abs(p - value);
    const std::int64_t d_best = std::abs(best - value);
    if (d < d_best || (d == d_best && p < best)) best = p;
  }
  return best;
}

std::vector<std::int64_t> scalar_reproduction_points(std::int64_t k, std::int64_t m) {
  if (k < 1 || m < 1 || m > k) throw Error(ErrorKind::invalid_parameter, "need 1 <= m <= k");
  std::vector<std::int64_t> points(m);
  for (std::int64_t c = 0; c < m; ++c) points[c] = cell_at(c, k, m).point();
  return points;
}

std::int64_t scalar_error_bound(std::int64_t k, std::int64_t m) {
  if (k < 1 || m < 1 || m > k) throw Error(ErrorKind::invalid_parameter, "need 1 <= m <= k");
  const std::int64_t widest = (k + m - 1) / m;
  return widest / 2;
}

std::int64_t scalar_error_bound_loose(std::int64_t k, std::int64_t m) {
  if (k < 1 || m < 1 || m > k) throw Error(ErrorKind::invalid_parameter, "need 1 <= m <= k");
  // ceil((k - m) / (2m)) with k >= m.
  return (k - m + 2 * m - 1) / (2 * m);
}

std::int64_t levels_for_distortion(std::int64_t k, double d) {
  if (k < 1 || !(d >= 0.0)) throw Error(ErrorKind::invalid_parameter, "need k >= 1, d >= 0");
  const auto m = ceil_i(static_cast<double>(k) / (2.0 * d + 1.0));
  return std::clamp<std::int64_t>(m, 1, k);
}

InversionVector scalar_quantize_encode(const InversionVector& x, const ScalarQuantizerSpec& spec) {
  if (static_cast<std::int64_t>(x.permutation_size()) != spec.n()) {
    throw Error(ErrorKind::size_mismatch, "scalar spec and inversion vector disagree on n");
  }
  const auto entries = x.entries();
  std::vector<std::int32_t> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    // Entry i (0-based) belongs to value i + 2, whose range is [0:i+1].
    const auto k = static_cast<std::int64_t>(i + 2);
    out[i] = static_cast<std::int32_t>(scalar_quantize_value(entries[i], k, spec.level(k)));
  }
  return InversionVector::adopt_unchecked(std::move(out));
}

Permutation scalar_quantize_permutation(const Permutation& sigma, const ScalarQuantizerSpec& spec) {
  require_size(sigma, spec.n());
  return from_inversion_vector(scalar_quantize_encode(to_inversion_vector(sigma), spec));
}

double log_codebook_size(const ScalarQuantizerSpec& spec, LogBase base) {
  double total = 0.0;
  for (auto m : spec.levels()) total += std::log(static_cast<double>(m));
  return from_nats(total, base);
}

std::int64_t guaranteed_distortion(const ScalarQuantizerSpec& spec) {
  std::int64_t total = 0;
  for (std::int64_t k = 2; k <= spec.n(); ++k) total += scalar_error_bound(k, spec.level(k));
  return total;
}

std::int64_t tighten_to_budget(ScalarQuantizerSpec& spec, double budget) {
  std::int64_t total = guaranteed_distortion(spec);
  if (within(static_cast<double>(total), budget)) return 0;
  std::vector<std::int64_t> levels = spec.levels();
  std::priority_queue<std::pair<std::int64_t, std::int64_t>> queue;
  for (std::int64_t k = 2; k <= spec.n(); ++k) {
    const std::int64_t err = scalar_error_bound(k, levels[k - 2]);
    if (err > 0) queue.emplace(err, k);
  }
  std::int64_t steps = 0;
  while (!within(static_cast<double>(total), budget)) {
    if (queue.empty()) {
      throw Error(ErrorKind::invalid_parameter, "distortion budget below zero");
    }
    const auto [err, k] = queue.top();
    queue.pop();
    const std::int64_t m = levels_for_distortion(k, static_cast<double>(err - 1));
    const std::int64_t new_err = scalar_error_bound(k, m);
    levels[k - 2] = m;
    total -= err - new_err;
    ++steps;
    if (new_err > 0) queue.emplace(new_err, k);
  }
  spec = ScalarQuantizerSpec::make(std::move(levels));
  return steps;
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::small: return "small";
    case Regime::moderate: return "moderate";
    case Regime::large: return "large";
  }
  return "unknown";
}

Regime parse_regime(std::string_view name) {
  if (name == "small") return Regime::small;
  if (name == "moderate") return Regime::moderate;
  if (name == "large") return Regime::large;
  throw Error(ErrorKind::parse_error, "unknown regime '" + std::string(name) + "'");
}

RegimeParams RegimeParams::small(double a, double delta) {
  RegimeParams p{Regime::small, a, delta, 0.0};
  p.validate();
  return p;
}

RegimeParams RegimeParams::moderate(double delta) {
  RegimeParams p{Regime::moderate, 0.0, delta, 0.0};
  p.validate();
  return p;
}

RegimeParams RegimeParams::large(double b) {
  RegimeParams p{Regime::large, 0.0, 0.0, b};
  p.validate();
  return p;
}

void RegimeParams::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorKind::invalid_parameter, what);
  };
  const bool delta_ok = delta > 0.0 && delta <= 1.0;
  switch (regime) {
    case Regime::small:
      if (!(a > 0.0)) fail("small regime needs a > 0");
      if (!delta_ok) fail("small regime needs 0 < delta <= 1");
      if (b != 0.0) fail("b is only meaningful in the large regime");
      break;
    case Regime::moderate:
      if (!delta_ok) fail("moderate regime needs 0 < delta <= 1");
      if (a != 0.0 || b != 0.0) fail("moderate regime takes only delta");
      break;
    case Regime::large:
      if (!(b > 0.0 && b <= 0.5)) fail("large regime needs 0 < b <= 1/2");
      if (a != 0.0 || delta != 0.0) fail("large regime takes only b");
      break;
  }
}

double target_distortion(Metric space, std::int64_t n, const RegimeParams& params) {
  params.validate();
  const auto nd = static_cast<double>(n);
  switch (params.regime) {
    case Regime::small: return params.a * std::pow(nd, params.delta);
    case Regime::moderate:
      return space == Metric::chebyshev ? std::pow(nd, params.delta)
                                        : std::pow(nd, 1.0 + params.delta);
    case Regime::large: return params.b * nd * nd;
  }
  return 0.0;
}

Permutation ScheduledCode::encode(const Permutation& sigma) const {
  if (const auto* block = std::get_if<BlockSortCode>(&code)) {
    return block_sort_encode_for(space, sigma, *block);
  }
  return scalar_quantize_permutation(sigma, std::get<ScalarQuantizerSpec>(code));
}

double ScheduledCode::log_codebook_size(LogBase base) const {
  return std::visit([base](const auto& c) { return permrd::log_codebook_size(c, base); }, code);
}

double ScheduledCode::rate() const {
  const double full = log_factorial(n, LogBase::bits);
  return full > 0.0 ? log_codebook_size(LogBase::bits) / full : 0.0;
}

namespace {

std::int64_t inverse_alpha(Metric space, DistortionMode mode) {
  if (mode == DistortionMode::worst) return 2;
  return space == Metric::kendall_tau ? 4 : 3;
}

ScheduledCode finish_block(Metric space, std::int64_t n, const RegimeParams& params,
                           DistortionMode mode, double target, std::int64_t k,
                           std::int64_t m) {
  if (m < 2 || k < 1) {
    throw Error(ErrorKind::invalid_parameter,
                "n = " + std::to_string(n) + " is too small for this regime (k=" +
                    std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
  const auto code = BlockSortCode::make(n, k, m);
  const double guaranteed = to_double(block_sort_distortion_bound(code, space, mode));
  if (!within(guaranteed, target)) {
    throw Error(ErrorKind::invalid_parameter, "block schedule cannot meet the target distortion");
  }
  return ScheduledCode{space, mode, params, n, target, code, guaranteed, 0};
}

ScheduledCode finish_scalar(std::int64_t n, const RegimeParams& params, DistortionMode mode,
                            double target, std::vector<std::int64_t> levels) {
  auto spec = ScalarQuantizerSpec::make(std::move(levels));
  const std::int64_t repairs = tighten_to_budget(spec, target);
  const auto guaranteed = static_cast<double>(guaranteed_distortion(spec));
  return ScheduledCode{Metric::inversion_l1, mode, params, n, target, std::move(spec),
                       guaranteed,           repairs};
}

}  // namespace

ScheduledCode schedule(Metric space, std::int64_t n, const RegimeParams& params,
                       DistortionMode mode) {
  params.validate();
  if (n < 2) throw Error(ErrorKind::degenerate_size, "schedules need n >= 2");
  const double target = target_distortion(space, n, params);
  const auto nd = static_cast<double>(n);
  const bool block_space = space != Metric::inversion_l1;

  if (params.regime != Regime::moderate &&
      (space == Metric::footrule || space == Metric::chebyshev)) {
    throw Error(ErrorKind::unsupported_combination,
                std::string(to_string(params.regime)) + " regime is only scheduled for tau and invl1");
  }

  if (params.regime == Regime::moderate) {
    if (space == Metric::chebyshev) {
      const std::int64_t m = std::min(floor_i(target) + 1, n);
      return finish_block(space, n, params, mode, target, n / m, m);
    }
    if (block_space) {
      const std::int64_t m =
          std::min(inverse_alpha(space, mode) * floor_i(std::pow(nd, params.delta)), n);
      return finish_block(space, n, params, mode, target, n / std::max<std::int64_t>(m, 1), m);
    }
    std::vector<std::int64_t> levels(n - 1);
    const double denom = (nd + 1.0) * (nd + 1.0);
    for (std::int64_t k = 2; k <= n; ++k) {
      levels[k - 2] = levels_for_distortion(k, static_cast<double>(k) * target / denom);
    }
    return finish_scalar(n, params, mode, target, std::move(levels));
  }

  if (params.regime == Regime::small) {
    if (block_space) {
      std::int64_t m = 2;
      std::int64_t k = 0;
      if (params.a >= 1.0) {
        m = floor_i(2.0 * params.a);
        k = floor_i(std::pow(nd, params.delta) / static_cast<double>(m));
      } else {
        k = floor_i(target / 2.0);
      }
      if (m > n) throw Error(ErrorKind::invalid_parameter, "block length exceeds n");
      return finish_block(space, n, params, mode, target, k, m);
    }
    std::vector<std::int64_t> levels(n - 1);
    if (params.a > 1.0) {
      const std::int64_t tail = floor_i(std::pow(nd, params.delta));
      for (std::int64_t k = 2; k <= n; ++k) {
        levels[k - 2] = k <= n - tail
                            ? k
                            : std::clamp<std::int64_t>(
                                  ceil_i(static_cast<double>(k) / (2.0 * params.a - 1.0)), 1, k);
      }
    } else {
      const std::int64_t cutoff = ceil_i(target);
      for (std::int64_t k = 2; k <= n; ++k) levels[k - 2] = k < cutoff ? (k + 2) / 3 : k;
    }
    return finish_scalar(n, params, mode, target, std::move(levels));
  }

  if (block_space) {
    const std::int64_t k = ceil_i(1.0 / (2.0 * params.b));
    return finish_block(space, n, params, mode, target, k, n / k);
  }
  std::vector<std::int64_t> levels(n - 1);
  for (std::int64_t k = 2; k <= n; ++k) {
    const double denom = 4.0 * params.b * static_cast<double>(k - 1) + 1.0;
    levels[k - 2] = std::clamp<std::int64_t>(ceil_i(static_cast<double>(k) / denom), 1, k);
  }
  return finish_scalar(n, params, mode, target, std::move(levels));
}

StridedSortCode::StridedSortCode(std::int64_t n, double delta) : requested_n_(n) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "need 0 < delta <= 1");
  }
  if (n < 4) throw Error(ErrorKind::invalid_parameter, "n too small for a strided code");
  m_ = ceil_i(std::pow(static_cast<double>(n), delta));
  k_ = m_ > 0 ? n / m_ : 0;
  n_ = k_ * m_;
  if (m_ < 2 || k_ < 2) {
    throw Error(ErrorKind::invalid_parameter,
                "n = " + std::to_string(n) + " is too small for delta = " + std::to_string(delta) +
                    " (need block length >= 2 and at least 2 blocks)");
  }
}

std::vector<std::int64_t> StridedSortCode::index_set(std::int64_t j) const {
  if (j < 1 || j > k_) throw Error(ErrorKind::invalid_parameter, "block index out of range");
  std::vector<std::int64_t> out;
  out.reserve(m_);
  if (j == k_) out.push_back(1);
  const std::int64_t first = (j - 1) * m_ + 2;
  const std::int64_t last = j == k_ ? n_ : j * m_ + 1;
  for (std::int64_t i = first; i <= last; ++i) out.push_back(i);
  return out;
}

Permutation StridedSortCode::encode(const Permutation& sigma) const {
  require_size(sigma, n_);
  auto positions = copy_values(inverse(sigma));
  std::vector<Permutation::value_type> gathered;
  for (std::int64_t j = 1; j <= k_; ++j) {
    const auto items = index_set(j);
    gathered.clear();
    for (auto item : items) gathered.push_back(positions[item - 1]);
    std::sort(gathered.begin(), gathered.end());
    for (std::size_t p = 0; p < items.size(); ++p) positions[items[p] - 1] = gathered[p];
  }
  return inverse(Permutation::adopt_unchecked(std::move(positions)));
}

}  // namespace permrd
