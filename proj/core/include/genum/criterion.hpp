#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace genum {

/// One histogram interval: its width in g-bins and the number of data
/// entries it holds.
struct IntervalSpec {
  std::uint64_t g_width;
  std::uint64_t count;

  friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

/**
 * A histogram over the extended domain
 * [origin - epsilon/2, origin + range + epsilon/2], with epsilon = range / E,
 * cut into G equal g-bins. Interval widths are counted in g-bins.
 *
 * Bounds are always computed relative to `origin` (the data minimum) so that
 * exact affine transforms of the data (power-of-two scaling, exact translation)
 * transform the bounds exactly as well.
 */
struct HistogramModel {
  std::uint64_t E = 1;
  std::uint64_t G = 1;
  double origin = 0.0;
  double range = 0.0;
  double epsilon = 1.0;
  std::vector<IntervalSpec> intervals;

  std::size_t K() const noexcept { return intervals.size(); }
  double domain_lower() const noexcept;
  double domain_upper() const noexcept;
  double domain_width() const noexcept { return range + epsilon; }
  double g_bin_width() const noexcept;

  /// Position of the g-bin boundary `cut` (0..G) in the value domain.
  double bound_at(std::uint64_t cut) const noexcept;

  /// K+1 interval bounds from domain_lower() to domain_upper().
  std::vector<double> bounds() const;

  /// Cumulative g-bin cuts, K+1 values from 0 to G.
  std::vector<std::uint64_t> cuts() const;

  std::uint64_t total_count() const noexcept;
  std::uint64_t total_width() const noexcept;

  friend bool operator==(const HistogramModel&, const HistogramModel&) = default;
};

/// The six additive terms of the criterion, in nats.
struct CostBreakdown {
  double num_intervals_prior = 0.0;
  double granularity_prior = 0.0;
  double boundary_prior = 0.0;
  double multinomial_choice = 0.0;
  double multinomial_factorial = 0.0;
  double bin_index = 0.0;
  double total = 0.0;
};

/// Rissanen's universal code length log*(k) in nats, with c0 = 2.865064.
double universal_code_length(std::uint64_t k);

/// ln(k!) via log-gamma; exact 0 for k <= 1.
double log_factorial(std::uint64_t k);

/// ln C(n, k) via log-gamma; exact 0 when k == 0 or k == n.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// G-Enum cost of `model` for a sample of size n.
CostBreakdown genum_cost(const HistogramModel& model, std::uint64_t n);

/// Enum cost of a model expressed directly in epsilon-bins (G == E, widths
/// are epsilon-bin counts). granularity_prior is always zero.
CostBreakdown enum_cost(const HistogramModel& model, std::uint64_t n);

/// genum_cost(merged) - genum_cost(model) where intervals k and k+1
/// (0-based) are merged. O(1).
double merge_delta_cost(const HistogramModel& model, std::size_t k,
                        std::uint64_t n);

/// 1 - model_cost / null_cost.
double level(double model_cost, double null_cost);

// Incremental pieces of the merge delta, shared with the optimizer.

/// Part of the merge delta that depends only on the two merged intervals:
/// multinomial factorial and bin-index terms.
double merge_local_delta(std::uint64_t h_a, std::uint64_t g_a,
                         std::uint64_t h_b, std::uint64_t g_b);

/// Bin-index part of merge_local_delta alone.
double width_merge_delta(std::uint64_t h_a, std::uint64_t g_a,
                         std::uint64_t h_b, std::uint64_t g_b);

/// Change of the K-dependent prior terms when going from K to K-1 intervals
/// at granularity G with n entries. Requires K >= 2.
double interval_count_delta(std::uint64_t K, std::uint64_t G, std::uint64_t n);

}  // namespace genum
