#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genum/synthlab.hpp"
#include "genum/twolevel.hpp"

namespace genum::cli {

enum class Experiment { OneOutlier, OutlierDist, HeavyTail, Scalability };

std::optional<Experiment> parse_experiment(std::string_view name);
const char* to_string(Experiment e);

struct ExperimentOptions {
  Experiment experiment = Experiment::OneOutlier;
  std::uint64_t reps = 20;
  std::uint64_t seed = 0;
  /// Sweep i over [min_exp, max_exp] in steps of `step`; defaults per experiment.
  std::optional<int> min_exp;
  std::optional<int> max_exp;
  int step = 1;
  /// Base sample size; ignored by scalability, whose n is 2^i.
  std::optional<std::uint64_t> n;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Default sweep bounds [lo, hi] for an experiment.
std::pair<int, int> default_exponents(Experiment e);

/// The data behind configuration i, repetition rep. Seeds depend on rep only,
/// so every configuration shares its base samples.
GeneratorSpec experiment_spec(Experiment e, int i, std::uint64_t rep, std::uint64_t seed,
                              std::optional<std::uint64_t> n = std::nullopt);

/// Swept parameter value of configuration i (v_out, sigma_O, mu_2 or n).
double swept_parameter(Experiment e, int i);

/// Scalability runs with early stopping, the other experiments without.
BuildOptions experiment_build_options(Experiment e);

struct Trial {
  GlobalHistogram standard;
  GlobalHistogram two_level;
  double standard_seconds = 0.0;
  double two_level_seconds = 0.0;
};

Trial run_trial(const DataSet& d, const BuildOptions& opts);

struct ExperimentRow {
  int exponent = 0;
  double parameter = 0.0;
  std::uint64_t n = 0;
  std::uint64_t reps = 0;
  double standard_mean_K = 0.0;
  double standard_std_K = 0.0;
  double two_level_mean_K = 0.0;
  double two_level_std_K = 0.0;
  double subsets_mean = 0.0;
  double subsets_std = 0.0;
  double standard_seconds = 0.0;
  double two_level_seconds = 0.0;
};

/// Runs every (configuration, repetition) pair, repetitions concurrently.
std::vector<ExperimentRow> run_experiment(const ExperimentOptions& opts);

std::string experiment_csv(Experiment e, const std::vector<ExperimentRow>& rows);

}  // namespace genum::cli
