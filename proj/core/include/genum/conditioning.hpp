#pragma once

#include <cstdint>
#include <optional>

#include "genum/dataset.hpp"

namespace genum {

inline constexpr double kDoubleMin = 1e-308;
inline constexpr double kDoubleMax = 1e308;
/// Minimum average number of representable values per epsilon-bin.
inline constexpr double kDistinctPerBin = 100.0;

struct RangePrecision {
  double rng = 0.0;
  std::optional<double> pr;  // undefined for a single distinct value
  std::optional<double> gr;
};

struct Collisions {
  std::uint64_t collision_count = 0;
  std::uint64_t max_colliding_bin_count = 0;
};

struct EffectiveE {
  std::uint64_t E = 1;
  bool at_mantissa_limit = false;
};

struct ConditioningReport {
  double rng = 0.0;
  std::optional<double> pr;
  std::optional<double> gr;
  std::uint64_t collision_count = 0;
  std::uint64_t max_colliding_bin_count = 0;
  bool verdict_ich = false;
  bool verdict_rich = false;
  bool verdict_pich = false;
  double t_c = 0.0;
  std::uint64_t t_E = 1;
  std::uint64_t effective_E = 1;
  bool at_mantissa_limit = false;
  /// Collision statistics at t_E bins, the ones behind verdict_pich.
  std::uint64_t pich_max_colliding_bin_count = 0;
};

RangePrecision range_precision_granular(const DataSet& d);

/// Collisions when d is cut into `bins` equal bins over the extended domain
/// of an E-bin grid. A bin collides when it holds two or more distinct values.
Collisions collision_count(const DataSet& d, std::uint64_t bins, std::uint64_t E);

/// round(sqrt(E) * ln E), at least 1.
std::uint64_t pich_bins(std::uint64_t E);

bool is_ich(const DataSet& d, std::uint64_t E);
bool is_rich(const DataSet& d, std::uint64_t E);

/// PICH at the effective E derived from e_max; false at the mantissa limit.
bool is_pich(const DataSet& d, std::uint64_t e_max = 1'000'000'000);

/// Rough count of binary64 values in [lo, hi], from the log-measure of the
/// interval against the full positive range [1e-308, 1e308] holding 2^63
/// values.
double estimate_distinct_representables(double lo, double hi);

EffectiveE effective_epsilon_bins(const DataSet& d,
                                  std::uint64_t e_max = 1'000'000'000);

ConditioningReport analyze(const DataSet& d, std::uint64_t e_max = 1'000'000'000);

}  // namespace genum
