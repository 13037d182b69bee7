#include "genum/logdomain.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "genum/conditioning.hpp"
#include "genum/error.hpp"

namespace genum {

double log_cr(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::NonFiniteInput, "log_cr: non-finite input");
  }
  static const double ln_min = std::log(kDoubleMin);
  if (x > 0.0) return kLogEpsilon + (std::log(x) - ln_min);
  if (x < 0.0) return -kLogEpsilon - (std::log(-x) - ln_min);
  return 0.0;
}

double LogMapping::forward(double x) const {
  if (x > 0.0) return pos_shift + (std::log(x) - std::log(pos_ref));
  if (x < 0.0) return -neg_shift - (std::log(-x) - std::log(neg_ref));
  return 0.0;
}

namespace {

// Smallest positive difference between consecutive logs of the magnitudes,
// taken in increasing magnitude order.
double min_log_gap(const std::vector<double>& magnitudes) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < magnitudes.size(); ++i) {
    const double g = std::log(magnitudes[i]) - std::log(magnitudes[i - 1]);
    if (g > 0.0 && g < best) best = g;
  }
  return std::isfinite(best) ? best : kLogEpsilon;
}

}  // namespace

std::pair<DataSet, LogMapping> log_dataset_cr(const DataSet& d) {
  if (d.n() == 0) {
    throw Error(ErrorCode::EmptyInput, "log_dataset_cr: empty dataset");
  }
  LogMapping m;
  std::vector<double> neg;
  std::vector<double> pos;
  for (const Entry& e : d.entries()) {
    if (e.value < 0.0) {
      neg.push_back(-e.value);
    } else if (e.value > 0.0) {
      pos.push_back(e.value);
    } else {
      m.has_zero = true;
    }
  }
  // Negative magnitudes arrive in decreasing order.
  std::vector<double> neg_up(neg.rbegin(), neg.rend());
  if (!neg_up.empty()) {
    m.has_neg = true;
    m.neg_ref = neg_up.front();
    m.neg_shift = min_log_gap(neg_up);
  }
  if (!pos.empty()) {
    m.has_pos = true;
    m.pos_ref = pos.front();
    m.pos_shift = min_log_gap(pos);
  }

  std::vector<Entry> out;
  out.reserve(d.distinct_count());
  for (const Entry& e : d.entries()) {
    const double y = m.forward(e.value);
    if (!out.empty() && out.back().value >= y) {
      out.back().frequency += e.frequency;
    } else {
      out.push_back({y, e.frequency});
    }
  }
  m.image_min = out.front().value;
  m.image_max = out.back().value;
  return {DataSet::from_entries(std::move(out)), m};
}

double invert_bound(double y, const LogMapping& m) {
  if (!std::isfinite(y) || y < m.image_min || y > m.image_max) {
    throw Error(ErrorCode::OutOfDomain, "invert_bound: outside the transformed hull");
  }
  if (y > 0.0) return m.pos_ref * std::exp(y - m.pos_shift);
  if (y < 0.0) return -(m.neg_ref * std::exp(-y - m.neg_shift));
  return 0.0;
}

}  // namespace genum
