// Acceptance suite: one PASS/FAIL line per criterion, with tolerances fixed
// below. Criteria listed in kExpectedRed are known not to hold as stated;
// their FAIL lines are printed with the measured evidence, and the process
// exit code only reports unexpected outcomes (a new failure, an expected
// failure that now passes, or an exception).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "permrd/geometry.hpp"
#include "permrd/mallows.hpp"
#include "permrd/metrics.hpp"
#include "permrd/parallel.hpp"
#include "permrd/quantizers.hpp"
#include "permrd/random.hpp"
#include "permrd/rd_harness.hpp"

using namespace permrd;

namespace {

// Tolerances and sizes.
constexpr double kOracleSeconds = 30.0;
constexpr double kRelationSeconds = 120.0;
constexpr double kRateSeconds = 120.0;
constexpr std::int64_t kRelationSamples = 100000;
constexpr double kRelationRateScale = 10.0;  // failure rate must stay below this / n
constexpr std::int64_t kMomentSamples = 100000;
constexpr double kMeanTolerance = 0.01;
constexpr double kVarianceTolerance = 0.05;
constexpr std::int64_t kBlockTrials = 10000;
constexpr double kBlockMeanTolerance = 0.02;
constexpr double kRateTolerance = 0.1;
constexpr double kTvTolerance = 0.01;
constexpr std::int64_t kTvDraws = 1000000;
constexpr double kEntropyTolerance = 1e-9;
constexpr double kAsymptoteTolerance = 0.01;
constexpr double kTypicalFraction = 0.99;
constexpr std::int64_t kStridedTrials = 1000;
constexpr double kStridedFactor = 0.9;

const std::set<int> kExpectedRed{4, 8, 11, 12};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

std::vector<Permutation> all_perms(int n) {
  std::vector<Permutation> out;
  for (const auto& v : oracle::all_permutations(n)) out.push_back(oracle::to_perm(v));
  return out;
}

// Adjacent-swap distances from one source to every arrangement.
std::map<oracle::Vec, int> bfs_from(const oracle::Vec& source) {
  std::map<oracle::Vec, int> dist{{source, 0}};
  std::queue<oracle::Vec> frontier;
  frontier.push(source);
  while (!frontier.empty()) {
    oracle::Vec cur = frontier.front();
    frontier.pop();
    const int d = dist[cur];
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      std::swap(cur[i], cur[i + 1]);
      if (dist.emplace(cur, d + 1).second) frontier.push(cur);
      std::swap(cur[i], cur[i + 1]);
    }
  }
  return dist;
}

Outcome oracle_equivalence() {
  Outcome out;
  const auto start = Clock::now();
  std::int64_t mismatches = 0, pairs = 0;
  for (int n = 1; n <= 5; ++n) {
    const auto all = oracle::all_permutations(n);
    for (const auto& a : all) {
      const auto swaps = bfs_from(a);
      const Permutation pa = oracle::to_perm(a);
      for (const auto& b : all) {
        const Permutation pb = oracle::to_perm(b);
        ++pairs;
        mismatches += footrule(pa, pb) != oracle::footrule(a, b);
        mismatches += chebyshev(pa, pb) != oracle::chebyshev(a, b);
        mismatches += kendall_tau(pa, pb) != swaps.at(b);
        mismatches += kendall_tau(pa, pb) != oracle::kendall_pairs(a, b);
        if (n >= 2) mismatches += inversion_l1(pa, pb) != oracle::inversion_l1(a, b);
      }
    }
  }
  const auto all6 = oracle::all_permutations(6);
  for (const auto& a : all6) {
    const Permutation pa = oracle::to_perm(a);
    for (const auto& b : all6) {
      ++pairs;
      mismatches += kendall_tau(pa, oracle::to_perm(b)) != oracle::kendall_pairs(a, b);
    }
  }
  const double elapsed = seconds_since(start);
  out.require(mismatches == 0, fmt("%lld mismatches", static_cast<long long>(mismatches)));
  out.require(elapsed < kOracleSeconds, fmt("runtime %.1f s >= %.0f s", elapsed, kOracleSeconds));
  out.note(fmt("%lld pairs, 0 mismatches allowed, %.2f s", static_cast<long long>(pairs), elapsed));
  return out;
}

Outcome bijection() {
  Outcome out;
  std::int64_t failures = 0, cases = 0;
  for (int n = 2; n <= 7; ++n) {
    for (const auto& v : oracle::all_permutations(n)) {
      const Permutation p = oracle::to_perm(v);
      const auto x = to_inversion_vector(p);
      ++cases;
      failures += from_inversion_vector(x) != p;
      failures += x.sum() != oracle::inversions(v);
    }
  }
  out.require(failures == 0, fmt("%lld failures", static_cast<long long>(failures)));
  out.note(fmt("%lld permutations, n = 2..7", static_cast<long long>(cases)));
  return out;
}

Outcome worked_examples() {
  Outcome out;
  const auto s1 = Permutation::from_values({1, 5, 4, 2, 3});
  const auto s2 = Permutation::from_values({3, 4, 5, 1, 2});
  const auto entries = [](const Permutation& p) {
    const auto x = to_inversion_vector(p);
    return oracle::Vec(x.entries().begin(), x.entries().end());
  };
  out.require(kendall_tau(s1, s2) == 7, "d_tau = 7");
  out.require(entries(s1) == oracle::Vec{0, 0, 2, 3}, "x(s1) = [0,0,2,3]");
  out.require(entries(s2) == oracle::Vec{0, 2, 2, 2}, "x(s2) = [0,2,2,2]");
  out.require(inversion_l1(s1, s2) == 3, "invl1 = 3");
  out.require(inverse(Permutation::from_values({2, 5, 4, 3, 1})) ==
                  Permutation::from_values({5, 1, 4, 3, 2}),
              "inverse of [2,5,4,3,1]");
  out.require(from_inversion_vector(insertion_to_extended_inversion(
                  InsertionVector::from_entries({1, 1, 1, 1}))) == Permutation::from_values({4, 3, 2, 1}),
              "insertion [1,1,1,1] -> [4,3,2,1]");
  out.note("6 exact values");
  return out;
}

Outcome distance_inequalities() {
  Outcome out;
  for (int n = 2; n <= 6; ++n) {
    const auto check = exhaustive_chain_check(n);
    out.require(check.footrule_chain_violations == 0,
                fmt("n=%d footrule chain: %lld violations", n,
                    static_cast<long long>(check.footrule_chain_violations)));
    out.require(check.inversion_upper_violations == 0,
                fmt("n=%d invl1 <= tau: %lld violations", n,
                    static_cast<long long>(check.inversion_upper_violations)));
    out.require(check.inversion_lower_violations == 0,
                fmt("n=%d tau <= (n-1) invl1: %lld of %lld pairs", n,
                    static_cast<long long>(check.inversion_lower_violations),
                    static_cast<long long>(check.pairs)));
    out.note(fmt("n=%d tau <= (2n-3) invl1: %lld violations", n,
                 static_cast<long long>(check.inversion_relaxed_violations)));
  }
  const auto a = Permutation::from_values({1, 3, 2});
  const auto b = Permutation::from_values({2, 3, 1});
  out.note(fmt("smallest counterexample: tau([1,3,2],[2,3,1]) = %lld, invl1 = %lld",
               static_cast<long long>(kendall_tau(a, b)), static_cast<long long>(inversion_l1(a, b))));

  const auto s4 = all_perms(4);
  std::int64_t tight = 0;
  bool upper_equal_at_identity = true;
  const auto id = Permutation::identity(4);
  for (const auto& x : s4) {
    upper_equal_at_identity &= kendall_tau(id, x) == inversion_l1(id, x);
    for (const auto& y : s4) {
      if (x != y && 3 * inversion_l1(x, y) == kendall_tau(x, y)) ++tight;
    }
  }
  out.require(tight > 0, "no pair in S_4 attains (n-1) invl1 = tau");
  out.require(upper_equal_at_identity, "tau(Id, s) = invl1(Id, s) for all s in S_4");
  out.note(fmt("S_4 pairs attaining (n-1) invl1 = tau: %lld, including ([1,3,4,2],[2,4,3,1]): %s",
               static_cast<long long>(tight),
               3 * inversion_l1(Permutation::from_values({1, 3, 4, 2}),
                                Permutation::from_values({2, 4, 3, 1})) ==
                       kendall_tau(Permutation::from_values({1, 3, 4, 2}),
                                   Permutation::from_values({2, 4, 3, 1}))
                   ? "yes"
                   : "no"));
  return out;
}

Outcome probabilistic_bounds() {
  Outcome out;
  const auto start = Clock::now();
  const std::vector<std::int64_t> sizes{50, 100, 200, 400};
  std::vector<double> r1, r2;
  for (auto n : sizes) {
    const auto report = relationship_tests(n, kRelationSamples, 20240501, 0.3, 0.45,
                                           default_thread_count());
    r1.push_back(report.c1_rate());
    r2.push_back(report.c2_rate());
    const double limit = kRelationRateScale / static_cast<double>(n);
    out.require(report.c1_rate() < limit, fmt("n=%lld c1 rate %.3g >= %.3g", static_cast<long long>(n),
                                              report.c1_rate(), limit));
    out.require(report.c2_rate() < limit, fmt("n=%lld c2 rate %.3g >= %.3g", static_cast<long long>(n),
                                              report.c2_rate(), limit));
    out.note(fmt("n=%lld: c1 rate %.3g, c2 rate %.3g", static_cast<long long>(n), report.c1_rate(),
                 report.c2_rate()));
  }
  // Decreasing: each rate is below the previous one, or both are zero.
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    out.require(r1[i] < r1[i - 1] || (r1[i] == 0 && r1[i - 1] == 0),
                fmt("c1 rate not decreasing at n=%lld", static_cast<long long>(sizes[i])));
    out.require(r2[i] < r2[i - 1] || (r2[i] == 0 && r2[i - 1] == 0),
                fmt("c2 rate not decreasing at n=%lld", static_cast<long long>(sizes[i])));
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < kRelationSeconds, fmt("runtime %.1f s", elapsed));
  out.note(fmt("%.1f s", elapsed));
  return out;
}

Outcome moments() {
  Outcome out;
  const std::int64_t n = 50;
  const double nd = static_cast<double>(n);
  const auto threads = default_thread_count();
  const auto tau = estimate_moments(Metric::kendall_tau, n, kMomentSamples, 7, threads);
  const auto foot = estimate_moments(Metric::footrule, n, kMomentSamples, 8, threads);
  const auto inv = estimate_moments(Metric::inversion_l1, n, kMomentSamples, 9, threads);
  const double tau_mean = nd * (nd - 1) / 4;
  const double tau_var = nd * (2 * nd + 5) * (nd - 1) / 72;
  const double foot_mean = (nd * nd - 1) / 3;
  out.require(std::abs(tau.mean - tau_mean) <= kMeanTolerance * tau_mean, "Kendall mean");
  out.require(std::abs(tau.variance - tau_var) <= kVarianceTolerance * tau_var, "Kendall variance");
  out.require(std::abs(foot.mean - foot_mean) <= kMeanTolerance * foot_mean, "footrule mean");
  out.require(inv.mean >= nd * (nd - 1) / 8, "invl1 mean lower bound");
  out.note(fmt("tau mean %.2f (ref %.1f), var %.1f (ref %.1f); footrule mean %.2f (ref %.0f); "
               "invl1 mean %.2f (>= %.1f)",
               tau.mean, tau_mean, tau.variance, tau_var, foot.mean, foot_mean, inv.mean,
               nd * (nd - 1) / 8));
  return out;
}

Outcome quantizer_guarantees() {
  Outcome out;
  const auto code = BlockSortCode::make(1000, 100, 10);
  const auto bound = [&](Metric m, DistortionMode mode) {
    return to_double(block_sort_distortion_bound(code, m, mode));
  };
  std::vector<Distance> tau(kBlockTrials), foot(kBlockTrials), cheb(kBlockTrials);
  parallel_for(static_cast<std::size_t>(kBlockTrials), default_thread_count(), [&](std::size_t t) {
    RandomStream rng(31, t);
    const auto sigma = random_permutation(1000, rng);
    tau[t] = kendall_tau(sigma, block_sort_encode(sigma, code));
    const auto ci = block_sort_encode_inverse_domain(sigma, code);
    foot[t] = footrule(sigma, ci);
    cheb[t] = chebyshev(sigma, ci);
  });
  const auto worst = [](const std::vector<Distance>& v) { return *std::max_element(v.begin(), v.end()); };
  const auto mean = [](const std::vector<Distance>& v) {
    long double s = 0;
    for (auto x : v) s += x;
    return static_cast<double>(s / v.size());
  };
  out.require(worst(tau) <= bound(Metric::kendall_tau, DistortionMode::worst), "tau worst");
  out.require(worst(foot) <= bound(Metric::footrule, DistortionMode::worst), "footrule worst");
  out.require(worst(cheb) <= bound(Metric::chebyshev, DistortionMode::worst), "chebyshev worst");
  const double tau_avg = bound(Metric::kendall_tau, DistortionMode::average);
  const double foot_avg = bound(Metric::footrule, DistortionMode::average);
  out.require(std::abs(mean(tau) - tau_avg) <= kBlockMeanTolerance * tau_avg, "tau mean");
  out.require(std::abs(mean(foot) - foot_avg) <= kBlockMeanTolerance * foot_avg, "footrule mean");
  out.note(fmt("n=1000 k=100 m=10: worst tau %lld/%g, footrule %lld/%g, chebyshev %lld/%g; "
               "mean tau %.2f (ref %g), footrule %.2f (ref %g)",
               static_cast<long long>(worst(tau)), bound(Metric::kendall_tau, DistortionMode::worst),
               static_cast<long long>(worst(foot)), bound(Metric::footrule, DistortionMode::worst),
               static_cast<long long>(worst(cheb)), bound(Metric::chebyshev, DistortionMode::worst),
               mean(tau), tau_avg, mean(foot), foot_avg));

  std::int64_t cardinality_failures = 0, codes = 0;
  for (int n = 2; n <= 6; ++n) {
    const auto all = all_perms(n);
    for (int m = 2; m <= n; ++m) {
      for (int k = 1; k * m <= n; ++k) {
        const auto c = BlockSortCode::make(n, k, m);
        std::set<std::vector<std::int32_t>> direct, inverse_domain;
        for (const auto& s : all) {
          const auto d = block_sort_encode(s, c);
          const auto i = block_sort_encode_inverse_domain(s, c);
          direct.emplace(d.values().begin(), d.values().end());
          inverse_domain.emplace(i.values().begin(), i.values().end());
        }
        const BigInt expected = factorial(n) / boost::multiprecision::pow(factorial(m), k);
        ++codes;
        cardinality_failures += BigInt(direct.size()) != expected;
        cardinality_failures += BigInt(inverse_domain.size()) != expected;
      }
    }
  }
  out.require(cardinality_failures == 0, "image cardinality n!/(m!)^k");
  out.note(fmt("%lld block codes with n <= 6 have exact image size", static_cast<long long>(codes)));

  std::int64_t scalar_failures = 0;
  for (std::int64_t k = 1; k <= 64; ++k) {
    for (std::int64_t m = 1; m <= k; ++m) {
      const std::int64_t loose = scalar_error_bound_loose(k, m);
      for (std::int64_t x = 0; x < k; ++x) {
        scalar_failures += std::abs(scalar_quantize_value(x, k, m) - x) > loose;
      }
    }
  }
  out.require(scalar_failures == 0, "scalar per-coordinate error bound");
  out.note("scalar error <= ceil((k/m - 1)/2) for every value, k <= 64, m <= k");
  return out;
}

Outcome rate_scaling() {
  Outcome out;
  const auto start = Clock::now();
  const std::vector<std::int64_t> sizes{100, 316, 1000};
  const auto params = RegimeParams::moderate(0.5);
  for (Metric space : {Metric::kendall_tau, Metric::footrule, Metric::inversion_l1, Metric::chebyshev}) {
    std::vector<double> gaps;
    std::string line = std::string(to_string(space)) + ":";
    for (auto n : sizes) {
      ExperimentConfig config;
      config.space = space;
      config.n = n;
      config.params = params;
      config.trials = 200;
      config.seed = 5;
      config.threads = default_thread_count();
      const auto rec = run_experiment(config);
      const double gap = std::abs(rec.rate - limit_rate(params));
      gaps.push_back(gap);
      out.require(gap <= kRateTolerance, fmt("%s n=%lld rate %.4f", std::string(to_string(space)).c_str(),
                                             static_cast<long long>(n), rec.rate));
      out.require(static_cast<double>(rec.worst_d) <= rec.bound_d &&
                      rec.bound_d <= rec.target_d * (1 + 1e-12),
                  fmt("%s n=%lld distortion guarantee", std::string(to_string(space)).c_str(),
                      static_cast<long long>(n)));
      line += fmt(" n=%lld rate %.4f gap %.4f;", static_cast<long long>(n), rec.rate, gap);
    }
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      out.require(gaps[i] < gaps[i - 1],
                  fmt("%s gap grows from n=%lld to n=%lld", std::string(to_string(space)).c_str(),
                      static_cast<long long>(sizes[i - 1]), static_cast<long long>(sizes[i])));
    }
    out.note(line);
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < kRateSeconds, fmt("runtime %.1f s", elapsed));
  return out;
}

Outcome geometry() {
  Outcome out;
  std::int64_t failures = 0;
  for (int n = 1; n <= 7; ++n) {
    std::vector<std::int64_t> counts(n * (n - 1) / 2 + 1, 0);
    for (const auto& v : oracle::all_permutations(n)) ++counts[oracle::inversions(v)];
    for (std::size_t k = 0; k < counts.size(); ++k) failures += mahonian(n, static_cast<std::int64_t>(k)) != counts[k];
  }
  out.require(failures == 0, "Mahonian numbers vs enumeration");
  failures = 0;
  for (std::int64_t n = 1; n <= 10; ++n) {
    for (std::int64_t d = 0; d <= std::min(n, n * (n - 1) / 2); ++d) {
      failures += cumulative_T(n, d) != mahonian(n + 1, d);
    }
  }
  out.require(failures == 0, "T_n(D) = K_{n+1}(D)");
  failures = 0;
  for (std::int64_t n = 2; n <= 12; ++n) {
    for (std::int64_t k = 1; k < n; ++k) failures += mahonian(n, k) > mahonian_binomial_bound(n, k);
  }
  out.require(failures == 0, "K_n(k) <= C(n+k-2, k)");
  failures = 0;
  for (int n = 2; n <= 5; ++n) {
    const auto all = all_perms(n);
    for (std::int64_t d = 0; d <= n * (n - 1) / 2; ++d) {
      const BigInt first = ball_brute(Metric::kendall_tau, all.front(), d);
      for (const auto& c : all) {
        const BigInt t = ball_brute(Metric::kendall_tau, c, d);
        failures += t != first;
        failures += t > ball_brute(Metric::inversion_l1, c, d);
      }
    }
  }
  out.require(failures == 0, "Kendall balls centre-free and inside inversion-l1 balls");
  out.note("all four checks exhaustive");
  return out;
}

double entropy_by_enumeration(int n, double q) {
  const auto model = MallowsModel::centred(q, n);
  double h = 0;
  for (const auto& s : all_perms(n)) {
    const double p = pmf(s, model);
    h -= p * std::log2(p);
  }
  return h;
}

Outcome mallows() {
  Outcome out;
  const auto model = MallowsModel::centred(0.5, 5);
  const auto s5 = all_perms(5);
  std::map<std::vector<std::int32_t>, std::size_t> index;
  for (std::size_t i = 0; i < s5.size(); ++i) index[{s5[i].values().begin(), s5[i].values().end()}] = i;
  const std::size_t threads = default_thread_count();
  const std::size_t chunks = std::max<std::size_t>(threads, 1) * 4;
  std::vector<std::vector<std::int64_t>> hist(chunks, std::vector<std::int64_t>(s5.size(), 0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    RandomStream rng(101, c);
    const std::int64_t draws = kTvDraws / static_cast<std::int64_t>(chunks) +
                               (static_cast<std::int64_t>(c) < kTvDraws % static_cast<std::int64_t>(chunks));
    for (std::int64_t i = 0; i < draws; ++i) {
      const auto s = sample_rim(model, rng);
      ++hist[c][index.at({s.values().begin(), s.values().end()})];
    }
  });
  double tv = 0;
  for (std::size_t i = 0; i < s5.size(); ++i) {
    std::int64_t count = 0;
    for (const auto& h : hist) count += h[i];
    tv += std::abs(static_cast<double>(count) / kTvDraws - pmf(s5[i], model));
  }
  tv /= 2;
  out.require(tv < kTvTolerance, fmt("TV %.4g", tv));

  double worst_entropy = 0;
  for (double q : {0.3, 0.7}) {
    worst_entropy = std::max(worst_entropy, std::abs(entropy(6, q).total - entropy_by_enumeration(6, q)));
  }
  out.require(worst_entropy < kEntropyTolerance, fmt("closed form vs enumeration %.3g", worst_entropy));

  double worst_symmetry = 0;
  for (double q : {0.3, 0.7, 2.0, 3.0}) {
    for (std::int64_t n = 1; n <= 50; ++n) {
      worst_symmetry = std::max(worst_symmetry, std::abs(entropy(n, q).total - entropy(n, 1 / q).total));
    }
  }
  out.require(worst_symmetry < kEntropyTolerance, fmt("q <-> 1/q symmetry %.3g", worst_symmetry));

  double worst_uniform = 0;
  for (std::int64_t n = 1; n <= 50; ++n) {
    worst_uniform = std::max(worst_uniform, std::abs(entropy(n, 1.0).total - log_factorial(n)));
  }
  out.require(worst_uniform < kEntropyTolerance, "entropy at q = 1 equals log n!");

  const double q = 0.7;
  const double per_item = entropy(10000, q).total / 10000.0;
  const double asymptote = oracle::binary_entropy_bits(q) / (1 - q);
  const double rel = std::abs(per_item - asymptote) / asymptote;
  out.require(rel < kAsymptoteTolerance, fmt("entropy/n relative error %.3g", rel));

  const double c = typical_radius_constant(0.5);
  const auto typical_model = MallowsModel::centred(0.5, 200);
  std::vector<char> inside(10000);
  parallel_for(inside.size(), threads, [&](std::size_t t) {
    RandomStream rng(202, t);
    const auto s = sample_rim(typical_model, rng);
    inside[t] = static_cast<double>(kendall_tau(s, typical_model.reference())) <= c * 200.0;
  });
  const double fraction = std::count(inside.begin(), inside.end(), 1) / static_cast<double>(inside.size());
  out.require(fraction >= kTypicalFraction, fmt("typical fraction %.4f", fraction));
  out.note(fmt("TV %.4f; entropy error %.2g; symmetry %.2g; entropy/n %.5f vs %.5f; "
               "c0(0.5) = %.4f, fraction within c0 n: %.4f",
               tv, worst_entropy, worst_symmetry, per_item, asymptote, c, fraction));
  return out;
}

Outcome strided_counterexample() {
  Outcome out;
  const StridedSortCode code(10000, 0.5);
  const auto n = code.n();
  const auto k = code.k();
  const auto m = code.m();
  const double scale = std::pow(static_cast<double>(n), 1.5);
  const double constant =
      ((k - 1.0) * m * m / 2.0 + (m - 1.0) * (m - 1.0) + 2.0 * n) / scale;
  struct Trial {
    double foot_ratio;
    Distance cheb;
    bool moved_first;
    bool item_one_first_in_last_set;
  };
  std::vector<Trial> trials(kStridedTrials);
  const auto last_set = code.index_set(k);
  parallel_for(trials.size(), default_thread_count(), [&](std::size_t t) {
    RandomStream rng(303, t);
    const auto sigma = random_permutation(n, rng);
    const auto encoded = code.encode(sigma);
    const auto pos = inverse(sigma);
    std::int64_t earliest = n + 1;
    for (auto v : last_set) earliest = std::min<std::int64_t>(earliest, pos(v));
    trials[t] = {static_cast<double>(footrule(sigma, encoded)) / scale, chebyshev(sigma, encoded),
                 sigma(1) != 1, pos(1) == earliest};
  });
  const double threshold = kStridedFactor * static_cast<double>((k - 1) * m);
  double worst_ratio = 0;
  std::int64_t eligible = 0, exceptions = 0, corrected_eligible = 0, corrected_exceptions = 0;
  for (const auto& t : trials) {
    worst_ratio = std::max(worst_ratio, t.foot_ratio);
    if (t.moved_first) {
      ++eligible;
      if (static_cast<double>(t.cheb) < threshold) ++exceptions;
    }
    if (!t.item_one_first_in_last_set) {
      ++corrected_eligible;
      if (t.cheb < (k - 1) * m + 1) ++corrected_exceptions;
    }
  }
  out.require(worst_ratio <= constant,
              fmt("footrule / n^1.5 reached %.4f > %.4f", worst_ratio, constant));
  out.require(exceptions == 0,
              fmt("%lld of %lld samples with sigma(1) != 1 have chebyshev < 0.9 (k-1) m",
                  static_cast<long long>(exceptions), static_cast<long long>(eligible)));
  out.note(fmt("n=%lld k=%lld m=%lld; max footrule/n^1.5 = %.4f (bound %.4f)",
               static_cast<long long>(n), static_cast<long long>(k), static_cast<long long>(m),
               worst_ratio, constant));
  out.note(fmt("when item 1 is not the earliest of its index set: %lld samples, %lld below (k-1)m+1",
               static_cast<long long>(corrected_eligible), static_cast<long long>(corrected_exceptions)));
  return out;
}

Outcome higher_order() {
  Outcome out;
  std::int64_t evaluated = 0, crossings = 0;
  std::map<std::string, double> smallest_crossing_delta;
  for (Metric space : {Metric::kendall_tau, Metric::inversion_l1}) {
    for (std::int64_t n : {100, 1000, 2000}) {
      for (int ai = 1; ai <= 80; ++ai) {
        for (int di = 1; di <= 100; ++di) {
          const double a = ai * 0.05;
          const double delta = di * 0.01;
          const auto hb = higher_order_bounds(space, n, RegimeParams::small(a, delta));
          ++evaluated;
          if (hb.lower > hb.upper) {
            ++crossings;
            const auto key = fmt("%s n=%lld", std::string(to_string(space)).c_str(), static_cast<long long>(n));
            auto it = smallest_crossing_delta.find(key);
            if (it == smallest_crossing_delta.end() || delta < it->second) smallest_crossing_delta[key] = delta;
          }
        }
      }
      for (int bi = 1; bi <= 50; ++bi) {
        const auto hb = higher_order_bounds(space, n, RegimeParams::large(bi * 0.01));
        ++evaluated;
        if (hb.lower > hb.upper) ++crossings;
      }
    }
  }
  out.require(crossings == 0, fmt("r_lower > r_upper at %lld of %lld grid points",
                                  static_cast<long long>(crossings), static_cast<long long>(evaluated)));
  for (const auto& [key, delta] : smallest_crossing_delta) {
    out.note(fmt("%s: first crossing at delta = %.2f", key.c_str(), delta));
  }

  const std::int64_t n = 2000;
  const double log_n = std::log2(static_cast<double>(n));
  std::int64_t outside = 0, checked = 0;
  double worst_excess = 0;
  for (Metric space : {Metric::kendall_tau, Metric::inversion_l1}) {
    for (int bi = 1; bi <= 50; ++bi) {
      const double b = bi * 0.01;
      const auto params = RegimeParams::large(b);
      const auto code = schedule(space, n, params);
      const double achieved = achieved_higher_order(code);
      const auto hb = higher_order_bounds(space, n, params);
      const double slack = std::ceil(1.0 / (2.0 * b)) * log_n;
      ++checked;
      const double excess = std::max(hb.lower - achieved, achieved - hb.upper);
      worst_excess = std::max(worst_excess, excess / slack);
      if (achieved < hb.lower - slack || achieved > hb.upper + slack) ++outside;
    }
  }
  out.require(outside == 0, fmt("%lld of %lld large-regime schedules outside the band",
                                static_cast<long long>(outside), static_cast<long long>(checked)));
  out.note(fmt("large regime n=2000: %lld schedules, band ceil(1/(2b)) log2 n, worst excess %.3f of band",
               static_cast<long long>(checked), worst_excess));
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence of the four distances", oracle_equivalence},
      {"inversion-vector bijection, n <= 7", bijection},
      {"worked examples", worked_examples},
      {"deterministic distance inequalities, n <= 6", distance_inequalities},
      {"probabilistic lower bounds c1 = 0.3, c2 = 0.45", probabilistic_bounds},
      {"Monte Carlo moments at n = 50", moments},
      {"quantizer guarantees", quantizer_guarantees},
      {"moderate-regime rate scaling, delta = 0.5", rate_scaling},
      {"ball geometry", geometry},
      {"Mallows model", mallows},
      {"strided counterexample code, n = 10^4, delta = 0.5", strided_counterexample},
      {"higher-order bounds", higher_order},
  };
  int passed = 0, unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.note(std::string("exception: ") + e.what());
      ++unexpected;
    }
    const bool expected_red = kExpectedRed.count(id) > 0;
    std::printf("%s criterion %d: %s%s\n", outcome.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), !outcome.pass && expected_red ? " (known)" : "");
    for (const auto& note : outcome.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    if (outcome.pass) ++passed;
    if (outcome.pass == expected_red) ++unexpected;
  }
  std::printf("%d of %zu criteria pass; %d unexpected outcomes\n", passed, criteria.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
