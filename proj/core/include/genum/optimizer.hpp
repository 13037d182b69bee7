#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "genum/criterion.hpp"
#include "genum/dataset.hpp"

namespace genum {

/// A nonempty g-bin.
struct GBin {
  std::uint64_t index;
  std::uint64_t count;
  bool multiple_distinct;

  friend bool operator==(const GBin&, const GBin&) = default;
};

/**
 * The data projected onto G equal g-bins of the extended domain. Only
 * nonempty bins are stored, in increasing index order, so that G can reach
 * 2^30 without allocating per-bin storage.
 */
struct Granularization {
  std::uint64_t E = 1;
  std::uint64_t G = 1;
  std::uint64_t n = 0;
  double origin = 0.0;
  double range = 0.0;
  double epsilon = 1.0;
  std::vector<GBin> bins;

  double domain_lower() const noexcept { return origin - epsilon / 2; }
  double domain_upper() const noexcept { return origin + (range + epsilon / 2); }

  /// Length-G count vector. Intended for small G (tests, diagnostics).
  std::vector<std::uint64_t> dense_counts() const;
  std::vector<bool> dense_multiple_distinct() const;

  /// Empty model shell (E, G, origin, range, epsilon) for this grid.
  HistogramModel model_shell() const;
};

struct BuildOptions {
  std::uint64_t e_max = 1'000'000'000;
  bool early_stop = false;
  std::optional<std::uint64_t> force_E;
};

struct StandardResult {
  HistogramModel model;
  CostBreakdown cost;
  std::uint64_t chosen_G = 1;
  bool at_mantissa_limit = false;
  /// Cost of the K=1 model at G=1, for level().
  double null_cost = 0.0;
};

inline constexpr std::uint64_t kMaxGranularity = std::uint64_t{1} << 30;

/// Half-width used around a single distinct value, where range / E vanishes.
double degenerate_epsilon(double value) noexcept;

/// g-bin index of x on the grid of `gr`.
std::uint64_t bin_index(double x, double origin, double range, double epsilon,
                        std::uint64_t G) noexcept;

/// Throws DegenerateDomain when min == max and G > 1.
Granularization granularize(const DataSet& d, std::uint64_t G, std::uint64_t E);

/// Bottom-up greedy merge from the finest model, keeping the best model seen.
HistogramModel greedy_build(const Granularization& gr);

/// Hill climbing over boundary moves, removals and insertions.
HistogramModel post_optimize(const HistogramModel& model,
                             const Granularization& gr);

/// Granularity sequence explored for a given E: 1, 2, 4, ... below
/// min(2^30, E), then min(2^30, E) itself.
std::vector<std::uint64_t> granularity_schedule(std::uint64_t E);

StandardResult build_standard(const DataSet& d, const BuildOptions& opts = {});

}  // namespace genum
