#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "genum/error.hpp"
#include "io.hpp"

namespace genum::cli {

std::optional<Experiment> parse_experiment(std::string_view name) {
  if (name == "one-outlier") return Experiment::OneOutlier;
  if (name == "outlier-dist") return Experiment::OutlierDist;
  if (name == "heavy-tail") return Experiment::HeavyTail;
  if (name == "scalability") return Experiment::Scalability;
  return std::nullopt;
}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::OneOutlier: return "one-outlier";
    case Experiment::OutlierDist: return "outlier-dist";
    case Experiment::HeavyTail: return "heavy-tail";
    case Experiment::Scalability: return "scalability";
  }
  return "unknown";
}

std::pair<int, int> default_exponents(Experiment e) {
  switch (e) {
    case Experiment::OneOutlier: return {0, 34};
    case Experiment::OutlierDist: return {0, 67};
    case Experiment::HeavyTail: return {0, 34};
    case Experiment::Scalability: return {10, 20};
  }
  return {0, 0};
}

double swept_parameter(Experiment e, int i) {
  const double p = std::ldexp(1.0, i);
  return e == Experiment::OutlierDist ? p * 1e-10 : p;
}

GeneratorSpec experiment_spec(Experiment e, int i, std::uint64_t rep, std::uint64_t seed,
                              std::optional<std::uint64_t> n) {
  GeneratorSpec s;
  s.seed = seed + rep;
  const double p = swept_parameter(e, i);
  switch (e) {
    case Experiment::OneOutlier:
      s.kind = GeneratorKind::Gaussian;
      s.n = n.value_or(10'000);
      s.mu = 1.0;
      s.sigma = 0.1;
      s.outliers = OutlierSpec{1, p, 0.0, 1.0};
      break;
    case Experiment::OutlierDist:
      s.kind = GeneratorKind::Gaussian;
      s.n = n.value_or(10'000);
      s.mu = 1.0;
      s.sigma = 0.1;
      s.outliers = OutlierSpec{100, std::nullopt, 1.0, p};
      break;
    case Experiment::HeavyTail:
      s.kind = GeneratorKind::GaussianMixture;
      s.n = n.value_or(20'000);
      s.components = {{0.5, 1.0, 0.1}, {0.5, p, p / 10}};
      break;
    case Experiment::Scalability:
      s.kind = GeneratorKind::BinomialMixture;
      s.n = static_cast<std::uint64_t>(p);
      s.trials = 20;
      s.sigma = 0.25;
      break;
  }
  return s;
}

BuildOptions experiment_build_options(Experiment e) {
  BuildOptions o;
  o.early_stop = e == Experiment::Scalability;
  return o;
}

Trial run_trial(const DataSet& d, const BuildOptions& opts) {
  using clock = std::chrono::steady_clock;
  Trial t;
  auto t0 = clock::now();
  t.standard = wrap_standard(d, build_standard(d, opts));
  auto t1 = clock::now();
  t.two_level = build_two_level(d, opts);
  auto t2 = clock::now();
  t.standard_seconds = std::chrono::duration<double>(t1 - t0).count();
  t.two_level_seconds = std::chrono::duration<double>(t2 - t1).count();
  return t;
}

namespace {

struct Sample {
  double standard_K = 0.0;
  double two_level_K = 0.0;
  double subsets = 0.0;
  double standard_seconds = 0.0;
  double two_level_seconds = 0.0;
  std::uint64_t n = 0;
};

std::pair<double, double> mean_std(const std::vector<Sample>& xs, double Sample::*field) {
  double sum = 0.0;
  for (const Sample& s : xs) sum += s.*field;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const Sample& s : xs) ss += (s.*field - mean) * (s.*field - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentOptions& opts) {
  const auto [def_lo, def_hi] = default_exponents(opts.experiment);
  const int lo = opts.min_exp.value_or(def_lo);
  const int hi = opts.max_exp.value_or(def_hi);
  if (opts.reps == 0 || opts.step <= 0 || lo > hi) {
    throw Error(ErrorCode::InvalidArguments, "experiment: empty sweep");
  }
  if (opts.experiment == Experiment::Scalability && (lo < 1 || hi > 30)) {
    throw Error(ErrorCode::InvalidArguments, "scalability: exponents must lie in [1, 30]");
  }
  std::vector<int> exps;
  for (int i = lo; i <= hi; i += opts.step) exps.push_back(i);

  const BuildOptions build = experiment_build_options(opts.experiment);
  std::vector<std::vector<Sample>> samples(exps.size(), std::vector<Sample>(opts.reps));
  const std::size_t tasks = exps.size() * opts.reps;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t c = t / opts.reps;
      const std::uint64_t rep = t % opts.reps;
      try {
        const DataSet d =
            generate(experiment_spec(opts.experiment, exps[c], rep, opts.seed, opts.n));
        const Trial tr = run_trial(d, build);
        samples[c][rep] = {static_cast<double>(tr.standard.K()),
                           static_cast<double>(tr.two_level.K()),
                           static_cast<double>(tr.two_level.subset_count),
                           tr.standard_seconds,
                           tr.two_level_seconds,
                           d.n()};
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRow> rows;
  for (std::size_t c = 0; c < exps.size(); ++c) {
    const auto& s = samples[c];
    ExperimentRow r;
    r.exponent = exps[c];
    r.parameter = swept_parameter(opts.experiment, exps[c]);
    r.n = s.front().n;
    r.reps = opts.reps;
    std::tie(r.standard_mean_K, r.standard_std_K) = mean_std(s, &Sample::standard_K);
    std::tie(r.two_level_mean_K, r.two_level_std_K) = mean_std(s, &Sample::two_level_K);
    std::tie(r.subsets_mean, r.subsets_std) = mean_std(s, &Sample::subsets);
    r.standard_seconds = mean_std(s, &Sample::standard_seconds).first;
    r.two_level_seconds = mean_std(s, &Sample::two_level_seconds).first;
    rows.push_back(r);
  }
  return rows;
}

std::string experiment_csv(Experiment e, const std::vector<ExperimentRow>& rows) {
  static constexpr const char* param_name[] = {"v_out", "sigma_o", "mu_2", "n"};
  std::string out = "exponent,";
  out += param_name[static_cast<int>(e)];
  out +=
      ",n,reps,standard_mean_K,standard_std_K,two_level_mean_K,two_level_std_K,"
      "subsets_mean,subsets_std,standard_seconds,two_level_seconds\n";
  for (const ExperimentRow& r : rows) {
    out += std::to_string(r.exponent) + ',' + format_double(r.parameter) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.reps) + ',' +
           format_double(r.standard_mean_K) + ',' + format_double(r.standard_std_K) + ',' +
           format_double(r.two_level_mean_K) + ',' + format_double(r.two_level_std_K) + ',' +
           format_double(r.subsets_mean) + ',' + format_double(r.subsets_std) + ',' +
           format_double(r.standard_seconds) + ',' + format_double(r.two_level_seconds) +
           '\n';
  }
  return out;
}

}  // namespace genum::cli
