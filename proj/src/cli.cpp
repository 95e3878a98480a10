#include "permrd/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "permrd/error.hpp"
#include "permrd/geometry.hpp"
#include "permrd/mallows.hpp"
#include "permrd/metrics.hpp"
#include "permrd/parallel.hpp"
#include "permrd/quantizers.hpp"
#include "permrd/random.hpp"
#include "permrd/rd_harness.hpp"

namespace permrd {

namespace {

struct GlobalOptions {
  std::string out_path;
  bool nats = false;
  std::size_t threads = 0;
  std::uint64_t seed = 1;

  LogBase base() const { return nats ? LogBase::nats : LogBase::bits; }
  std::size_t thread_count() const { return threads > 0 ? threads : default_thread_count(); }
};

// Counts given as doubles so that "1e5" is accepted.
std::int64_t whole(double value, const char* name) {
  if (!(value >= 0.0) || value != std::floor(value) || value > 9.0e15) {
    throw Error(ErrorKind::invalid_parameter,
                std::string(name) + " must be a non-negative integer");
  }
  return static_cast<std::int64_t>(value);
}

std::vector<Permutation> read_all(std::istream& in) {
  std::vector<Permutation> out;
  for (auto& entry : read_permutations(in)) out.push_back(std::move(entry.permutation));
  return out;
}

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::parse_error, "cannot open '" + path + "'");
      stream_ = &file_;
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::invalid_parameter, "cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct RegimeFlags {
  bool small = false;
  bool moderate = false;
  bool large = false;
  double a = 1.0;
  double delta = 0.5;
  double b = 0.25;

  void attach(CLI::App* cmd) {
    auto* s = cmd->add_flag("--small", small, "small regime, D = a n^delta");
    auto* m = cmd->add_flag("--moderate", moderate, "moderate regime, D = n^(1+delta)");
    auto* l = cmd->add_flag("--large", large, "large regime, D = b n^2");
    s->excludes(m)->excludes(l);
    m->excludes(l);
    cmd->add_option("--a", a, "small-regime coefficient")->check(CLI::PositiveNumber);
    cmd->add_option("--delta", delta, "regime exponent in (0, 1]");
    cmd->add_option("--b", b, "large-regime coefficient in (0, 1/2]");
  }

  RegimeParams params() const {
    if (small) return RegimeParams::small(a, delta);
    if (large) return RegimeParams::large(b);
    return RegimeParams::moderate(delta);
  }
};

void cmd_dist(const std::string& metric_name, const std::string& input_path, bool csv,
              const GlobalOptions& g, std::istream& in, std::ostream& out) {
  const Metric metric = parse_metric(metric_name);
  Input source(input_path, in);
  const auto entries = read_permutations(source.get());
  if (entries.size() % 2 != 0) {
    throw Error(ErrorKind::parse_error,
                "line " + std::to_string(entries.back().line_number) +
                    ": permutation has no partner (pairs are consecutive lines)");
  }
  Output sink(g.out_path, out);
  if (csv) sink.get() << "schema_version,pair,metric,n,distance\n";
  for (std::size_t i = 0; i < entries.size(); i += 2) {
    const auto& a = entries[i];
    const auto& b = entries[i + 1];
    if (a.permutation.size() != b.permutation.size()) {
      throw Error(ErrorKind::size_mismatch, "lines " + std::to_string(a.line_number) + " and " +
                                                std::to_string(b.line_number) +
                                                ": permutations differ in size");
    }
    const Distance d = distance(metric, a.permutation, b.permutation);
    if (csv) {
      sink.get() << kCsvSchemaVersion << ',' << (i / 2 + 1) << ',' << to_string(metric) << ','
                 << a.permutation.size() << ',' << d << '\n';
    } else {
      sink.get() << d << '\n';
    }
  }
}

void cmd_quantize(const std::string& space_name, const RegimeFlags& flags,
                  const std::string& mode_name, double n_value, double count_value,
                  const std::string& input_path, const GlobalOptions& g, std::istream& in,
                  std::ostream& out) {
  const Metric space = parse_metric(space_name);
  const DistortionMode mode = parse_distortion_mode(mode_name);
  std::vector<Permutation> inputs;
  if (!input_path.empty()) {
    Input source(input_path, in);
    inputs = read_all(source.get());
    if (inputs.empty()) throw Error(ErrorKind::empty_input, "no permutations in input");
  } else {
    const std::int64_t n = whole(n_value, "--n");
    const std::int64_t count = whole(count_value, "--count");
    if (n < 2) throw Error(ErrorKind::invalid_parameter, "--n must be at least 2");
    for (std::int64_t t = 0; t < count; ++t) {
      RandomStream rng(g.seed, static_cast<std::uint64_t>(t));
      inputs.push_back(random_permutation(n, rng));
    }
    if (inputs.empty()) throw Error(ErrorKind::invalid_parameter, "--count must be positive");
  }
  const std::int64_t n = static_cast<std::int64_t>(inputs.front().size());
  for (const auto& sigma : inputs) {
    if (static_cast<std::int64_t>(sigma.size()) != n) {
      throw Error(ErrorKind::size_mismatch, "all inputs must share one size");
    }
  }
  const ScheduledCode code = schedule(space, n, flags.params(), mode);
  Output sink(g.out_path, out);
  Distance worst = 0;
  long double sum = 0.0L;
  for (const auto& sigma : inputs) {
    const auto codeword = code.encode(sigma);
    const Distance d = distance(space, sigma, codeword);
    worst = std::max(worst, d);
    sum += static_cast<long double>(d);
    sink.get() << format_permutation(codeword) << '\n';
  }
  std::ostringstream params;
  if (const auto* block = std::get_if<BlockSortCode>(&code.code)) {
    params << " k=" << block->k << " m=" << block->m;
  }
  sink.get() << "# space=" << to_string(space) << " regime=" << to_string(code.params.regime)
             << " mode=" << to_string(mode) << " n=" << n << params.str()
             << " log_codebook=" << format_double(code.log_codebook_size(g.base()))
             << " base=" << to_string(g.base()) << " target=" << format_double(code.target)
             << " bound=" << format_double(code.guaranteed) << " observed_worst=" << worst
             << " observed_mean="
             << format_double(static_cast<double>(sum / static_cast<long double>(inputs.size())))
             << " count=" << inputs.size() << '\n';
}

void cmd_mallows(const std::string& action, double n_value, double q, double count_value,
                 const std::string& perm_text, const std::string& reference_text,
                 const GlobalOptions& g, std::ostream& out) {
  const std::int64_t n = whole(n_value, "--n");
  std::optional<Permutation> reference;
  if (!reference_text.empty()) reference = parse_permutation(reference_text);
  if (action == "entropy") {
    if (n < 1) throw Error(ErrorKind::invalid_parameter, "--n must be positive");
    const auto result = entropy(n, q, g.base());
    Output sink(g.out_path, out);
    sink.get() << "schema_version,n,q,base,total,linear_coefficient,remainder\n"
               << kCsvSchemaVersion << ',' << n << ',' << format_double(q) << ','
               << to_string(g.base()) << ',' << format_double(result.total) << ','
               << (result.linear_coefficient ? format_double(*result.linear_coefficient) : "")
               << ',' << (result.remainder ? format_double(*result.remainder) : "") << '\n';
    return;
  }
  if (action == "pmf") {
    if (perm_text.empty()) throw Error(ErrorKind::invalid_parameter, "pmf needs --perm");
    const auto sigma = parse_permutation(perm_text);
    const MallowsModel model(q, reference ? *reference : Permutation::identity(sigma.size()));
    if (model.n() != sigma.size()) {
      throw Error(ErrorKind::size_mismatch, "--perm and --reference differ in size");
    }
    Output sink(g.out_path, out);
    sink.get() << "schema_version,n,q,log_pmf,pmf\n"
               << kCsvSchemaVersion << ',' << sigma.size() << ',' << format_double(q) << ','
               << format_double(log_pmf(sigma, model, g.base())) << ','
               << format_double(pmf(sigma, model)) << '\n';
    return;
  }
  if (action == "sample") {
    if (n < 1 && !reference) throw Error(ErrorKind::invalid_parameter, "--n must be positive");
    const MallowsModel model(q, reference ? *reference : Permutation::identity(n));
    const std::int64_t count = whole(count_value, "--count");
    Output sink(g.out_path, out);
    for (std::int64_t t = 0; t < count; ++t) {
      RandomStream rng(g.seed, static_cast<std::uint64_t>(t));
      sink.get() << format_permutation(sample_rim(model, rng)) << '\n';
    }
    return;
  }
  throw Error(ErrorKind::invalid_parameter, "mallows action must be sample, entropy or pmf");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse_error, "not a number in list: '" + item + "'");
    }
  }
  if (values.empty()) throw Error(ErrorKind::parse_error, "empty list");
  return values;
}

void cmd_rdcurve(const std::string& space_name, double n_value, const std::string& deltas,
                 const std::string& mode_name, double trials_value, const GlobalOptions& g,
                 std::ostream& out) {
  ExperimentConfig base;
  base.space = parse_metric(space_name);
  base.n = whole(n_value, "--n");
  base.mode = parse_distortion_mode(mode_name);
  base.trials = whole(trials_value, "--trials");
  base.seed = g.seed;
  base.threads = g.thread_count();
  std::vector<ExperimentRecord> records;
  for (double delta : parse_list(deltas)) {
    ExperimentConfig config = base;
    config.params = RegimeParams::moderate(delta);
    records.push_back(run_experiment(config));
  }
  Output sink(g.out_path, out);
  write_csv_header(sink.get());
  for (const auto& r : records) write_csv_row(sink.get(), r);
}

void cmd_ballsize(const std::string& metric_name, double n_value, double dmax_value,
                  const std::string& center_text, const GlobalOptions& g, std::ostream& out) {
  const Metric metric = parse_metric(metric_name);
  const std::int64_t n = whole(n_value, "--n");
  if (n < 2) throw Error(ErrorKind::invalid_parameter, "--n must be at least 2");
  const std::int64_t top = max_distance(metric, n);
  const std::int64_t dmax = std::min(whole(dmax_value, "--dmax"), top);
  const Permutation center =
      center_text.empty() ? Permutation::identity(n) : parse_permutation(center_text);
  if (static_cast<std::int64_t>(center.size()) != n) {
    throw Error(ErrorKind::size_mismatch, "--center must have size n");
  }
  std::optional<MahonianTable> table;
  if (metric == Metric::kendall_tau) table.emplace(n);
  Output sink(g.out_path, out);
  sink.get() << "schema_version,metric,n,d,ball_size,log_ball_size,bound,log_bound,base\n";
  for (std::int64_t d = 0; d <= dmax; ++d) {
    const BigInt size = table ? table->cumulative(d) : ball_brute(metric, center, d);
    std::optional<BigInt> bound;
    if (metric == Metric::kendall_tau && d <= n) bound = kendall_ball_bound(n, d);
    if (metric == Metric::inversion_l1) bound = inversion_l1_ball_bound(n, d);
    sink.get() << kCsvSchemaVersion << ',' << to_string(metric) << ',' << n << ',' << d << ','
               << size << ',' << format_double(log_big(size, g.base())) << ','
               << (bound ? bound->str() : "") << ','
               << (bound ? format_double(log_big(*bound, g.base())) : "") << ','
               << to_string(g.base()) << '\n';
  }
}

void cmd_moments(const std::string& metric_name, double n_value, double trials_value,
                 const GlobalOptions& g, std::ostream& out) {
  const Metric metric = parse_metric(metric_name);
  const std::int64_t n = whole(n_value, "--n");
  const std::int64_t trials = whole(trials_value, "--trials");
  const auto estimate = estimate_moments(metric, n, trials, g.seed, g.thread_count());
  const auto ref = moment_reference(metric, n);
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  Output sink(g.out_path, out);
  sink.get() << "schema_version,metric,n,trials,seed,mean,variance,ref_mean,ref_variance,"
                "ref_variance_leading_order,ref_mean_lower,ref_mean_upper,ref_variance_upper\n"
             << kCsvSchemaVersion << ',' << to_string(metric) << ',' << n << ',' << trials << ','
             << g.seed << ',' << format_double(estimate.mean) << ','
             << format_double(estimate.variance) << ',' << opt(ref.mean) << ','
             << opt(ref.variance) << ',' << (ref.variance_leading_order ? 1 : 0) << ','
             << opt(ref.mean_lower) << ',' << opt(ref.mean_upper) << ','
             << opt(ref.variance_upper) << '\n';
}

void cmd_relations(const std::string& sizes, double samples_value, double c1, double c2,
                   const GlobalOptions& g, std::ostream& out) {
  const std::int64_t samples = whole(samples_value, "--samples");
  Output sink(g.out_path, out);
  sink.get() << "schema_version,n,samples,seed,c1,c1_failures,c1_rate,c2,c2_failures,c2_rate,"
                "footrule_chain_violations,inversion_upper_violations,"
                "inversion_lower_violations\n";
  for (double n_value : parse_list(sizes)) {
    const std::int64_t n = whole(n_value, "--n");
    const auto r = relationship_tests(n, samples, g.seed, c1, c2, g.thread_count());
    sink.get() << kCsvSchemaVersion << ',' << n << ',' << samples << ',' << g.seed << ','
               << format_double(c1) << ',' << r.c1_failures << ',' << format_double(r.c1_rate())
               << ',' << format_double(c2) << ',' << r.c2_failures << ','
               << format_double(r.c2_rate()) << ','
               << r.chain.footrule_chain_violations << ',' << r.chain.inversion_upper_violations
               << ',' << r.chain.inversion_lower_violations << '\n';
  }
}

void cmd_sweep(const std::string& config_path, const GlobalOptions& g, std::istream& in,
               std::ostream& out) {
  Input source(config_path, in);
  std::stringstream buffer;
  buffer << source.get().rdbuf();
  const auto configs = parse_sweep(buffer.str(), g.thread_count());
  std::vector<ExperimentRecord> records;
  records.reserve(configs.size());
  for (const auto& c : configs) records.push_back(run_experiment(c));
  Output sink(g.out_path, out);
  write_csv_header(sink.get());
  for (const auto& r : records) write_csv_row(sink.get(), r);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"permrd: permutation distances, quantizers and Mallows model tools"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--out", g.out_path, "write output to this file instead of stdout");
  app.add_flag("--nats", g.nats, "report logarithms in nats instead of bits");
  app.add_option("--threads", g.threads,
                 "worker threads (default: PERMRD_THREADS or hardware concurrency)");
  app.add_option("--seed", g.seed, "seed for every randomized command");

  std::string metric = "tau";
  std::string space = "tau";
  std::string input;
  std::string mode = "worst";
  bool csv = false;
  double n = 0;
  double count = 1;
  double trials = 10000;

  auto* dist = app.add_subcommand("dist", "distance between consecutive pairs of permutations");
  dist->add_option("--metric", metric, "footrule | chebyshev | tau | invl1");
  dist->add_option("--input", input, "permutation file (default stdin)");
  dist->add_flag("--csv", csv, "emit CSV rows instead of bare distances");

  RegimeFlags regime;
  auto* quantize = app.add_subcommand("quantize", "encode permutations with a scheduled code");
  quantize->add_option("--space", space, "footrule | chebyshev | tau | invl1");
  regime.attach(quantize);
  quantize->add_option("--mode", mode, "worst | average");
  quantize->add_option("--n", n, "size of random inputs");
  quantize->add_option("--count", count, "number of random inputs");
  quantize->add_option("--input", input, "permutation file instead of random inputs");

  std::string action;
  double q = 1.0;
  std::string perm;
  std::string reference;
  auto* mallows = app.add_subcommand("mallows", "Mallows model: sample, entropy, pmf");
  mallows->add_option("action", action, "sample | entropy | pmf")->required();
  mallows->add_option("--n", n, "permutation size");
  mallows->add_option("--q", q, "model parameter q > 0");
  mallows->add_option("--count", count, "number of samples");
  mallows->add_option("--perm", perm, "permutation for pmf, space separated");
  mallows->add_option("--reference", reference, "reference permutation (default identity)");

  std::string deltas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  auto* rdcurve = app.add_subcommand("rdcurve", "achieved rate over a moderate-regime delta grid");
  rdcurve->add_option("--space", space, "footrule | chebyshev | tau | invl1");
  rdcurve->add_option("--n", n, "permutation size")->required();
  rdcurve->add_option("--deltas", deltas, "comma-separated delta values");
  rdcurve->add_option("--mode", mode, "worst | average");
  rdcurve->add_option("--trials", trials, "encoded samples per delta");

  double dmax = 0;
  std::string center;
  auto* ballsize = app.add_subcommand("ballsize", "ball sizes and their upper bounds");
  ballsize->add_option("--metric", metric, "footrule | chebyshev | tau | invl1");
  ballsize->add_option("--n", n, "permutation size")->required();
  ballsize->add_option("--dmax", dmax, "largest radius")->required();
  ballsize->add_option("--center", center, "ball centre (default identity)");

  auto* moments = app.add_subcommand("moments", "Monte Carlo distance moments vs references");
  moments->add_option("--metric", metric, "footrule | chebyshev | tau | invl1");
  moments->add_option("--n", n, "permutation size")->required();
  moments->add_option("--trials", trials, "sampled pairs");

  std::string sizes = "50,100,200,400";
  double samples = 100000;
  double c1 = 0.3;
  double c2 = 0.45;
  auto* relations = app.add_subcommand("relations", "distance inequality checks on random pairs");
  relations->add_option("--n", sizes, "comma-separated sizes");
  relations->add_option("--samples", samples, "pairs per size");
  relations->add_option("--c1", c1, "constant for c1 n cheb <= footrule");
  relations->add_option("--c2", c2, "constant for c2 tau <= invl1");

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "run experiments from a JSON sweep file");
  sweep->add_option("--config", config_path, "JSON sweep file (default stdin)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dist) cmd_dist(metric, input, csv, g, in, out);
    if (*quantize) cmd_quantize(space, regime, mode, n, count, input, g, in, out);
    if (*mallows) cmd_mallows(action, n, q, count, perm, reference, g, out);
    if (*rdcurve) cmd_rdcurve(space, n, deltas, mode, trials, g, out);
    if (*ballsize) cmd_ballsize(metric, n, dmax, center, g, out);
    if (*moments) cmd_moments(metric, n, trials, g, out);
    if (*relations) cmd_relations(sizes, samples, c1, c2, g, out);
    if (*sweep) cmd_sweep(config_path, g, in, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace permrd
