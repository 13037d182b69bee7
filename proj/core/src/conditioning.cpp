#include "genum/conditioning.hpp"

#include <algorithm>
#include <cmath>

#include "genum/error.hpp"
#include "genum/optimizer.hpp"

namespace genum {

RangePrecision range_precision_granular(const DataSet& d) {
  RangePrecision out;
  out.rng = d.range();
  const auto& es = d.entries();
  if (es.size() < 2) return out;
  double pr = es[1].value - es[0].value;
  for (std::size_t i = 2; i < es.size(); ++i) {
    pr = std::min(pr, es[i].value - es[i - 1].value);
  }
  out.pr = pr;
  out.gr = out.rng / pr;
  return out;
}

Collisions collision_count(const DataSet& d, std::uint64_t bins, std::uint64_t E) {
  if (bins == 0 || E == 0) {
    throw Error(ErrorCode::InvalidArguments, "collision_count: bins and E must be >= 1");
  }
  Collisions out;
  if (d.distinct_count() < 2) return out;
  const double origin = d.min_value();
  const double range = d.range();
  const double eps = range / static_cast<double>(E);

  std::uint64_t current = 0;
  std::uint64_t total = 0;
  std::size_t distinct = 0;
  auto flush = [&] {
    if (distinct >= 2) {
      out.collision_count += total;
      out.max_colliding_bin_count = std::max(out.max_colliding_bin_count, total);
    }
  };
  bool first = true;
  for (const Entry& e : d.entries()) {
    const std::uint64_t idx = bin_index(e.value, origin, range, eps, bins);
    if (first || idx != current) {
      if (!first) flush();
      first = false;
      current = idx;
      total = 0;
      distinct = 0;
    }
    total += e.frequency;
    ++distinct;
  }
  flush();
  return out;
}

std::uint64_t pich_bins(std::uint64_t E) {
  const double e = static_cast<double>(E);
  const double t = std::round(std::sqrt(e) * std::log(e));
  return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
}

bool is_ich(const DataSet& d, std::uint64_t E) {
  return collision_count(d, E, E).collision_count >= 1;
}

bool is_rich(const DataSet& d, std::uint64_t E) {
  return static_cast<double>(collision_count(d, E, E).collision_count) >
         std::log(static_cast<double>(d.n()));
}

bool is_pich(const DataSet& d, std::uint64_t e_max) {
  if (d.distinct_count() < 2) return false;
  const EffectiveE eff = effective_epsilon_bins(d, e_max);
  if (eff.at_mantissa_limit) return false;
  const Collisions c = collision_count(d, pich_bins(eff.E), eff.E);
  return static_cast<double>(c.max_colliding_bin_count) >
         std::log(static_cast<double>(d.n()));
}

namespace {

// 2^63 * (ln b - ln a) / (ln 1e308 - ln 1e-308) for magnitudes 0 <= a < b.
double one_sided(double a, double b) {
  const double lo = std::clamp(a, kDoubleMin, kDoubleMax);
  const double hi = std::clamp(b, kDoubleMin, kDoubleMax);
  const double span = std::log(kDoubleMax) - std::log(kDoubleMin);
  return 0x1p63 * (std::log(hi) - std::log(lo)) / span;
}

}  // namespace

double estimate_distinct_representables(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCode::InvalidRange,
                "estimate_distinct_representables: requires finite lo < hi");
  }
  double nd = 0.0;
  if (lo >= 0.0) {
    nd = one_sided(lo, hi);
  } else if (hi <= 0.0) {
    nd = one_sided(-hi, -lo);
  } else {
    nd = one_sided(0.0, -lo) + one_sided(0.0, hi);
  }
  // Both ends below 1e-308 collapse the log measure; two values still exist.
  return std::max(nd, 2.0);
}

EffectiveE effective_epsilon_bins(const DataSet& d, std::uint64_t e_max) {
  if (e_max == 0) {
    throw Error(ErrorCode::InvalidArguments, "effective_epsilon_bins: e_max must be >= 1");
  }
  if (d.distinct_count() < 2) return {1, true};
  const double nd = estimate_distinct_representables(d.min_value(), d.max_value());
  if (nd / static_cast<double>(e_max) >= kDistinctPerBin) return {e_max, false};
  const double e = std::ceil(nd / kDistinctPerBin);
  return {std::max<std::uint64_t>(1, static_cast<std::uint64_t>(e)), true};
}

ConditioningReport analyze(const DataSet& d, std::uint64_t e_max) {
  ConditioningReport r;
  const RangePrecision rp = range_precision_granular(d);
  r.rng = rp.rng;
  r.pr = rp.pr;
  r.gr = rp.gr;
  const EffectiveE eff = effective_epsilon_bins(d, e_max);
  r.effective_E = eff.E;
  r.at_mantissa_limit = eff.at_mantissa_limit;
  r.t_c = std::log(static_cast<double>(d.n()));
  r.t_E = pich_bins(eff.E);

  const Collisions at_e = collision_count(d, eff.E, eff.E);
  r.collision_count = at_e.collision_count;
  r.max_colliding_bin_count = at_e.max_colliding_bin_count;
  r.verdict_ich = at_e.collision_count >= 1;
  r.verdict_rich = static_cast<double>(at_e.collision_count) > r.t_c;

  const Collisions at_t = collision_count(d, r.t_E, eff.E);
  r.pich_max_colliding_bin_count = at_t.max_colliding_bin_count;
  r.verdict_pich = !eff.at_mantissa_limit &&
                   static_cast<double>(at_t.max_colliding_bin_count) > r.t_c;
  return r;
}

}  // namespace genum
