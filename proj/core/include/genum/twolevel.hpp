#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "genum/dataset.hpp"
#include "genum/logdomain.hpp"
#include "genum/optimizer.hpp"

namespace genum {

enum class SubsetOrigin { LogInterval, Merged, Split };

const char* to_string(SubsetOrigin origin);

/// A contiguous run of source entries, [first, first + data.distinct_count()).
struct Subset {
  DataSet data;
  bool pwch = true;
  SubsetOrigin origin = SubsetOrigin::LogInterval;
  std::size_t first = 0;
};

struct SubsetPartition {
  std::vector<Subset> subsets;
  bool covering = true;
  /// Mapping used for the log-domain histogram, when one was built.
  LogMapping mapping;
};

struct SplitPlan {
  std::uint64_t k = 2;
  /// a_0 = a, ..., a_k = b; geometric in the initial domain.
  std::vector<double> cut_points;
  double n_eps = 0.0;
  double n_ik = 0.0;
};

struct GlobalInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t count = 0;
  double density = 0.0;
  bool boundary = false;
  std::size_t subset_index = 0;

  friend bool operator==(const GlobalInterval&, const GlobalInterval&) = default;
};

struct GlobalHistogram {
  std::vector<GlobalInterval> intervals;
  std::uint64_t n = 0;
  std::size_t subset_count = 1;
  bool two_level_triggered = false;
  /// (G, E) per subset.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> per_subset_granularity;
  std::vector<double> total_cost_per_subset;

  std::size_t K() const noexcept { return intervals.size(); }
  friend bool operator==(const GlobalHistogram&, const GlobalHistogram&) = default;
};

/// Predicted count of the first t_E-th of each piece when [a, b] (0 < a < b)
/// holding n_i entries is cut into k log-equal pieces.
double predicted_first_bin_count(double a, double b, double n_i, std::uint64_t k,
                                 std::uint64_t t_E);

/// Smallest k in [2, n_i] passing the PWCH prediction, found by dichotomy.
/// When no k passes, returns the k minimizing the prediction margin.
std::uint64_t split_piece_count(double a, double b, std::uint64_t n_i,
                                std::uint64_t t_E);

/// Level-one partition from a histogram of the log-transformed data.
SubsetPartition first_level_partition(const DataSet& d, const BuildOptions& opts = {});

/// Left-to-right sweeps merging adjacent subsets whose union is PWCH.
SubsetPartition merge_adjacent_pwch(SubsetPartition p,
                                    std::uint64_t e_max = 1'000'000'000);

/// Geometric split of a same-sign PICH subset. Empty pieces are dropped from
/// the returned list.
std::pair<SplitPlan, std::vector<DataSet>> split_pich_subset(
    const DataSet& s, std::uint64_t e_max = 1'000'000'000);

/// g-bin grid of one sub-histogram, used to place reconciled bounds.
struct Grid {
  double origin = 0.0;
  double range = 0.0;
  double epsilon = 1.0;
  std::uint64_t G = 1;

  double line(double cut) const;
  static Grid of(const HistogramModel& m);
};

/// Two adjacent intervals to reconcile: source entries [begin, split) lie in
/// the left one, which starts at `lower`; [split, end) lie in the right one,
/// which ends at `upper`.
struct BoundaryInput {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t begin = 0;
  std::size_t split = 0;
  std::size_t end = 0;
  Grid left_grid;
  Grid right_grid;
  std::size_t left_subset = 0;
};

struct BoundaryPiece {
  GlobalInterval interval;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Builds a histogram on the union of the two intervals' data and replaces
/// them with one, two or three contiguous intervals spanning [lower, upper).
std::vector<BoundaryPiece> build_boundary(const DataSet& d, const BoundaryInput& in,
                                          const BuildOptions& opts = {});

/// Standard histogram as a single-subset global histogram.
GlobalHistogram wrap_standard(const DataSet& d, const StandardResult& r);

GlobalHistogram build_two_level(const DataSet& d, const BuildOptions& opts = {});

/// Reconciles per-subset histograms into one contiguous histogram. `results`
/// holds one standard build per subset of `partition` (a covering partition
/// of `d`).
GlobalHistogram assemble(const DataSet& d, const SubsetPartition& partition,
                         const std::vector<StandardResult>& results,
                         const BuildOptions& opts);

}  // namespace genum
