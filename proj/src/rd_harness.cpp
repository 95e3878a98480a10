#include "permrd/rd_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <ostream>

#include "permrd/error.hpp"
#include "permrd/mallows.hpp"
#include "permrd/parallel.hpp"
#include "permrd/random.hpp"

namespace permrd {

RateResult rate_function(Metric space, std::int64_t n, double d) {
  if (n < 2) throw Error(ErrorKind::degenerate_size, "rate function needs n >= 2");
  if (!(d > 0.0)) return {1.0, std::nullopt, std::nullopt, std::nullopt};
  const double exponent = std::log(d) / std::log(static_cast<double>(n));
  const double delta = space == Metric::chebyshev ? exponent : exponent - 1.0;
  return {std::clamp(1.0 - delta, 0.0, 1.0), delta, std::nullopt, std::nullopt};
}

double limit_rate(const RegimeParams& params) {
  params.validate();
  switch (params.regime) {
    case Regime::small: return 1.0;
    case Regime::moderate: return 1.0 - params.delta;
    case Regime::large: return 0.0;
  }
  return 0.0;
}

HigherOrderBounds higher_order_bounds(Metric space, std::int64_t n, const RegimeParams& params,
                                      LogBase base) {
  params.validate();
  if (space != Metric::kendall_tau && space != Metric::inversion_l1) {
    throw Error(ErrorKind::unsupported_combination,
                "higher-order bounds exist for tau and invl1 only");
  }
  if (n < 2) throw Error(ErrorKind::degenerate_size, "higher-order bounds need n >= 2");
  const double nd = static_cast<double>(n);
  const double ln2 = std::numbers::ln2;
  double lower = 0.0;
  double upper = 0.0;
  if (params.regime == Regime::small) {
    const double a = params.a;
    const double n_delta = std::pow(nd, params.delta);
    if (params.delta < 1.0) {
      lower = -a * (1.0 - params.delta) * n_delta * std::log(nd);
    } else {
      lower = -nd * ((1.0 + a) * std::log1p(a) - a * std::log(a));
    }
    if (space == Metric::kendall_tau) {
      if (a < 1.0) {
        upper = -n_delta * a * ln2 / 2.0;
      } else {
        const double m = std::floor(2.0 * a);
        upper = -n_delta * std::lgamma(m + 1.0) / m;
      }
    } else {
      lower -= n_delta * ln2;
      if (a > 1.0) {
        upper = -std::floor(n_delta) * std::log(2.0 * a - 1.0);
      } else {
        upper = -std::ceil(a * n_delta) * std::log(3.0);
      }
    }
  } else if (params.regime == Regime::large) {
    const double b = params.b;
    lower = std::max(0.0, nd * std::log(1.0 / (2.0 * b * std::numbers::e * std::numbers::e)));
    const double blocks = std::ceil(1.0 / ((space == Metric::kendall_tau ? 2.0 : 4.0) * b));
    upper = nd * std::log(blocks);
  } else {
    throw Error(ErrorKind::unsupported_combination,
                "higher-order bounds are stated for the small and large regimes");
  }
  return {from_nats(lower, base), from_nats(upper, base), true};
}

double achieved_higher_order(const ScheduledCode& code, LogBase base) {
  return code.log_codebook_size(base) - log_factorial(code.n, base) * limit_rate(code.params);
}

MomentReference moment_reference(Metric metric, std::int64_t n) {
  if (n < 2) throw Error(ErrorKind::degenerate_size, "moments need n >= 2");
  const double nd = static_cast<double>(n);
  MomentReference ref;
  switch (metric) {
    case Metric::kendall_tau:
      ref.mean = nd * (nd - 1.0) / 4.0;
      ref.variance = nd * (2.0 * nd + 5.0) * (nd - 1.0) / 72.0;
      break;
    case Metric::footrule:
      ref.mean = (nd * nd - 1.0) / 3.0;
      ref.variance = 2.0 * nd * nd * nd / 45.0;
      ref.variance_leading_order = true;
      break;
    case Metric::inversion_l1:
      ref.mean_lower = nd * (nd - 1.0) / 8.0;
      ref.variance_upper = (nd + 1.0) * (nd + 2.0) * (2.0 * nd + 3.0) / 6.0;
      break;
    case Metric::chebyshev:
      ref.mean_upper = nd;
      break;
  }
  return ref;
}

MomentEstimate estimate_moments(Metric metric, std::int64_t n, std::int64_t samples,
                                std::uint64_t seed, std::size_t threads) {
  if (samples < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 samples");
  if (n < 2) throw Error(ErrorKind::degenerate_size, "moments need n >= 2");
  std::vector<Distance> values(samples);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t t) {
    RandomStream rng(seed, t);
    const auto a = random_permutation(n, rng);
    const auto b = random_permutation(n, rng);
    values[t] = distance(metric, a, b);
  });
  long double sum = 0.0L;
  for (auto v : values) sum += static_cast<long double>(v);
  const long double mean = sum / static_cast<long double>(samples);
  long double squares = 0.0L;
  for (auto v : values) {
    const long double d = static_cast<long double>(v) - mean;
    squares += d * d;
  }
  return {static_cast<double>(mean), static_cast<double>(squares / (samples - 1)), samples};
}

namespace {

struct PairOutcome {
  bool footrule_chain_ok;
  bool inversion_upper_ok;
  bool inversion_lower_ok;
  bool inversion_relaxed_ok;
};

PairOutcome check_pair(const Permutation& a, const Permutation& b) {
  const auto n = static_cast<Distance>(a.size());
  const Distance cheb = chebyshev(a, b);
  const Distance foot = footrule(a, b);
  const Distance tau_inv = kendall_tau(inverse(a), inverse(b));
  const Distance tau = kendall_tau(a, b);
  const Distance inv = inversion_l1(a, b);
  return {n * cheb >= foot && foot >= tau_inv && 2 * tau_inv >= foot,
          inv <= tau, tau <= (n - 1) * inv, tau <= std::max<Distance>(2 * n - 3, 1) * inv};
}

}  // namespace

ChainCheck exhaustive_chain_check(std::int64_t n) {
  if (n < 2 || n > 7) throw Error(ErrorKind::limit_exceeded, "exhaustive check needs 2 <= n <= 7");
  std::vector<Permutation> all;
  std::vector<Permutation::value_type> values(n);
  for (std::int64_t i = 0; i < n; ++i) values[i] = static_cast<Permutation::value_type>(i + 1);
  do {
    all.push_back(Permutation::adopt_unchecked(values));
  } while (std::next_permutation(values.begin(), values.end()));
  ChainCheck check;
  for (const auto& a : all) {
    for (const auto& b : all) {
      const auto outcome = check_pair(a, b);
      ++check.pairs;
      if (!outcome.footrule_chain_ok) ++check.footrule_chain_violations;
      if (!outcome.inversion_upper_ok) ++check.inversion_upper_violations;
      if (!outcome.inversion_lower_ok) ++check.inversion_lower_violations;
      if (!outcome.inversion_relaxed_ok) ++check.inversion_relaxed_violations;
    }
  }
  return check;
}

RelationshipReport relationship_tests(std::int64_t n, std::int64_t samples, std::uint64_t seed,
                                      double c1, double c2, std::size_t threads) {
  if (n < 2) throw Error(ErrorKind::degenerate_size, "relationship tests need n >= 2");
  if (samples < 1) throw Error(ErrorKind::invalid_parameter, "need at least one sample");
  struct Outcome {
    PairOutcome chain;
    bool c1_fail;
    bool c2_fail;
  };
  std::vector<Outcome> outcomes(samples);
  const double nd = static_cast<double>(n);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t t) {
    RandomStream rng(seed, t);
    const auto a = random_permutation(n, rng);
    const auto b = random_permutation(n, rng);
    const auto cheb = static_cast<double>(chebyshev(a, b));
    const auto foot = static_cast<double>(footrule(a, b));
    const auto tau = static_cast<double>(kendall_tau(a, b));
    const auto inv = static_cast<double>(inversion_l1(a, b));
    outcomes[t] = {check_pair(a, b), c1 * nd * cheb > foot, c2 * tau > inv};
  });
  RelationshipReport report;
  report.n = n;
  report.samples = samples;
  report.c1 = c1;
  report.c2 = c2;
  for (const auto& o : outcomes) {
    ++report.chain.pairs;
    if (!o.chain.footrule_chain_ok) ++report.chain.footrule_chain_violations;
    if (!o.chain.inversion_upper_ok) ++report.chain.inversion_upper_violations;
    if (!o.chain.inversion_lower_ok) ++report.chain.inversion_lower_violations;
    if (!o.chain.inversion_relaxed_ok) ++report.chain.inversion_relaxed_violations;
    if (o.c1_fail) ++report.c1_failures;
    if (o.c2_fail) ++report.c2_failures;
  }
  return report;
}

namespace {

std::string scheme_name(Metric space) {
  switch (space) {
    case Metric::kendall_tau: return "block_sort";
    case Metric::footrule:
    case Metric::chebyshev: return "block_sort_inverse";
    case Metric::inversion_l1: return "scalar";
  }
  return "unknown";
}

}  // namespace

ExperimentRecord run_experiment(const ExperimentConfig& config) {
  config.params.validate();
  if (config.trials < 1) throw Error(ErrorKind::invalid_parameter, "trials must be >= 1");
  if (config.n > kMaxExperimentSize) {
    throw Error(ErrorKind::limit_exceeded,
                "n exceeds the experiment limit of " + std::to_string(kMaxExperimentSize));
  }
  if (config.mallows_q && !(*config.mallows_q > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "Mallows q must be positive");
  }

  ExperimentRecord record;
  record.space = std::string(to_string(config.space));
  record.regime = std::string(to_string(config.params.regime));
  record.mode = std::string(to_string(config.mode));
  record.delta = config.params.delta;
  record.a = config.params.a;
  record.b = config.params.b;
  record.trials = config.trials;
  record.seed = config.seed;
  record.source = config.mallows_q ? "mallows" : "uniform";
  record.q = config.mallows_q;

  std::function<Permutation(const Permutation&)> encode;
  std::optional<ScheduledCode> scheduled;
  std::optional<StridedSortCode> strided;
  std::int64_t n = config.n;

  if (config.scheme == SchemeKind::scheduled) {
    scheduled = schedule(config.space, config.n, config.params, config.mode);
    record.scheme = scheme_name(config.space);
    record.target_d = scheduled->target;
    record.bound_d = scheduled->guaranteed;
    record.log2_codebook = scheduled->log_codebook_size(LogBase::bits);
    record.budget_repairs = scheduled->budget_repairs;
    encode = [&](const Permutation& s) { return scheduled->encode(s); };
  } else {
    if (config.space != Metric::footrule && config.space != Metric::chebyshev) {
      throw Error(ErrorKind::unsupported_combination,
                  "the strided code is measured in footrule or chebyshev");
    }
    if (config.params.regime != Regime::moderate) {
      throw Error(ErrorKind::unsupported_combination, "the strided code takes a moderate delta");
    }
    strided.emplace(config.n, config.params.delta);
    n = strided->n();
    const auto k = static_cast<double>(strided->k());
    const auto m = static_cast<double>(strided->m());
    record.scheme = "strided";
    record.target_d = target_distortion(config.space, n, config.params);
    record.bound_d = config.space == Metric::footrule
                         ? (k - 1.0) * m * m / 2.0 + (m - 1.0) * (m - 1.0) + 2.0 * n
                         : static_cast<double>(n - 1);
    record.log2_codebook = log_factorial(n, LogBase::bits) - k * log_factorial(strided->m());
    encode = [&](const Permutation& s) { return strided->encode(s); };
  }
  record.n = n;
  const double full = log_factorial(n, LogBase::bits);
  record.rate = full > 0.0 ? record.log2_codebook / full : 0.0;

  std::optional<MallowsModel> model;
  if (config.mallows_q) model.emplace(MallowsModel::centred(*config.mallows_q, n));

  std::vector<Distance> distortion(config.trials);
  parallel_for(static_cast<std::size_t>(config.trials), config.threads, [&](std::size_t t) {
    RandomStream rng(config.seed, t);
    const auto sigma = model ? sample_rim(*model, rng) : random_permutation(n, rng);
    distortion[t] = distance(config.space, sigma, encode(sigma));
  });
  Distance worst = 0;
  long double sum = 0.0L;
  for (auto d : distortion) {
    worst = std::max(worst, d);
    sum += static_cast<long double>(d);
  }
  record.worst_d = worst;
  record.mean_d = static_cast<double>(sum / static_cast<long double>(config.trials));
  return record;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

void write_csv_header(std::ostream& os) {
  os << "schema_version,space,scheme,n,delta,a,b,target_d,log2_codebook,worst_d,mean_d,trials,"
        "seed,regime,mode,bound_d,rate,source,q,budget_repairs\n";
}

void write_csv_row(std::ostream& os, const ExperimentRecord& r) {
  os << kCsvSchemaVersion << ',' << r.space << ',' << r.scheme << ',' << r.n << ','
     << format_double(r.delta) << ',' << format_double(r.a) << ',' << format_double(r.b) << ','
     << format_double(r.target_d) << ',' << format_double(r.log2_codebook) << ',' << r.worst_d
     << ',' << format_double(r.mean_d) << ',' << r.trials << ',' << r.seed << ',' << r.regime
     << ',' << r.mode << ',' << format_double(r.bound_d) << ',' << format_double(r.rate) << ','
     << r.source << ',' << (r.q ? format_double(*r.q) : std::string()) << ',' << r.budget_repairs
     << '\n';
}

namespace {

using nlohmann::json;

template <typename T>
std::vector<T> as_list(const json& entry, const char* key, std::vector<T> fallback) {
  if (!entry.contains(key)) return fallback;
  const json& value = entry.at(key);
  std::vector<T> out;
  if (value.is_array()) {
    for (const auto& item : value) out.push_back(item.get<T>());
  } else {
    out.push_back(value.get<T>());
  }
  if (out.empty()) throw Error(ErrorKind::parse_error, std::string("empty list for '") + key + "'");
  return out;
}

}  // namespace

std::vector<ExperimentConfig> parse_sweep(const std::string& json_text,
                                          std::size_t default_threads) {
  std::vector<ExperimentConfig> configs;
  try {
    const json doc = json::parse(json_text);
    if (!doc.contains("experiments") || !doc.at("experiments").is_array()) {
      throw Error(ErrorKind::parse_error, "sweep needs an \"experiments\" array");
    }
    std::size_t index = 0;
    for (const auto& entry : doc.at("experiments")) {
      ++index;
      const auto where = "experiment " + std::to_string(index) + ": ";
      if (!entry.contains("space") || !entry.contains("n")) {
        throw Error(ErrorKind::parse_error, where + "'space' and 'n' are required");
      }
      const auto regime = parse_regime(entry.value("regime", std::string("moderate")));
      const auto spaces = as_list<std::string>(entry, "space", {});
      const auto sizes = as_list<std::int64_t>(entry, "n", {});
      const auto modes = as_list<std::string>(entry, "mode", {"worst"});
      const auto deltas = as_list<double>(entry, "delta", {0.5});
      const auto as = as_list<double>(entry, "a", {1.0});
      const auto bs = as_list<double>(entry, "b", {0.25});
      const auto scheme_text = entry.value("scheme", std::string("scheduled"));
      SchemeKind scheme = SchemeKind::scheduled;
      if (scheme_text == "strided") {
        scheme = SchemeKind::strided;
      } else if (scheme_text != "scheduled") {
        throw Error(ErrorKind::parse_error, where + "unknown scheme '" + scheme_text + "'");
      }
      ExperimentConfig base;
      base.scheme = scheme;
      base.trials = entry.value("trials", std::int64_t{10000});
      base.seed = entry.value("seed", std::uint64_t{1});
      base.threads = default_threads;
      if (entry.contains("mallows_q")) base.mallows_q = entry.at("mallows_q").get<double>();

      std::vector<RegimeParams> params;
      if (regime == Regime::small) {
        for (double a : as) {
          for (double d : deltas) params.push_back(RegimeParams::small(a, d));
        }
      } else if (regime == Regime::moderate) {
        for (double d : deltas) params.push_back(RegimeParams::moderate(d));
      } else {
        for (double b : bs) params.push_back(RegimeParams::large(b));
      }
      for (const auto& space : spaces) {
        for (auto n : sizes) {
          for (const auto& mode : modes) {
            for (const auto& p : params) {
              ExperimentConfig c = base;
              c.space = parse_metric(space);
              c.n = n;
              c.mode = parse_distortion_mode(mode);
              c.params = p;
              configs.push_back(c);
            }
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("sweep config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse_error) throw;
    throw Error(ErrorKind::parse_error, std::string("sweep config: ") + e.what());
  }
  return configs;
}

}  // namespace permrd
