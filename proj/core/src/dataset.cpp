#include "genum/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genum/error.hpp"

namespace genum {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::NonPositiveInteger: return "NonPositiveInteger";
    case ErrorCode::InvalidArguments: return "InvalidArguments";
    case ErrorCode::InconsistentCounts: return "InconsistentCounts";
    case ErrorCode::InconsistentWidths: return "InconsistentWidths";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveNullCost: return "NonPositiveNullCost";
    case ErrorCode::DegenerateDomain: return "DegenerateDomain";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotPich: return "NotPich";
    case ErrorCode::UnsplittableDegenerate: return "UnsplittableDegenerate";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::PropagatedBuildError: return "PropagatedBuildError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

DataSet DataSet::from_values(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyInput, "dataset: no values");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "dataset: non-finite value at index " + std::to_string(i), i);
    }
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  DataSet d;
  d.entries_.reserve(sorted.size());
  for (double v : sorted) {
    // -0.0 and +0.0 compare equal and are stored as one entry.
    if (!d.entries_.empty() && d.entries_.back().value == v) {
      ++d.entries_.back().frequency;
    } else {
      d.entries_.push_back({v == 0.0 ? 0.0 : v, 1});
    }
  }
  d.entries_.shrink_to_fit();
  d.n_ = sorted.size();
  return d;
}

DataSet DataSet::from_entries(std::vector<Entry> entries) {
  if (entries.empty()) {
    throw Error(ErrorCode::EmptyInput, "dataset: no entries");
  }
  DataSet d;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (!std::isfinite(e.value)) {
      throw Error(ErrorCode::NonFiniteValue,
                  "dataset: non-finite value at index " + std::to_string(i), i);
    }
    if (e.frequency == 0) {
      throw Error(ErrorCode::InvalidArguments,
                  "dataset: zero frequency at index " + std::to_string(i), i);
    }
    if (i > 0 && !(entries[i - 1].value < e.value)) {
      throw Error(ErrorCode::InvalidArguments,
                  "dataset: values not strictly increasing at index " +
                      std::to_string(i),
                  i);
    }
    d.n_ += e.frequency;
  }
  d.entries_ = std::move(entries);
  return d;
}

DataSet DataSet::slice(double lo, double hi, bool lo_inclusive) const {
  if (!(lo < hi)) {
    throw Error(ErrorCode::InvalidArguments, "slice: requires lo < hi");
  }
  auto by_value = [](const Entry& e, double v) { return e.value < v; };
  auto first = lo_inclusive
                   ? std::lower_bound(entries_.begin(), entries_.end(), lo, by_value)
                   : std::upper_bound(entries_.begin(), entries_.end(), lo,
                                      [](double v, const Entry& e) { return v < e.value; });
  auto last = std::upper_bound(entries_.begin(), entries_.end(), hi,
                               [](double v, const Entry& e) { return v < e.value; });
  if (first >= last) {
    throw Error(ErrorCode::EmptyRange, "slice: no entries in range");
  }
  return subrange(static_cast<std::size_t>(first - entries_.begin()),
                  static_cast<std::size_t>(last - entries_.begin()));
}

DataSet DataSet::subrange(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > entries_.size()) {
    throw Error(ErrorCode::EmptyRange, "subrange: empty or out of bounds");
  }
  DataSet d;
  d.entries_.assign(entries_.begin() + static_cast<std::ptrdiff_t>(begin),
                    entries_.begin() + static_cast<std::ptrdiff_t>(end));
  for (const Entry& e : d.entries_) d.n_ += e.frequency;
  return d;
}

std::vector<double> DataSet::expand() const {
  std::vector<double> out;
  out.reserve(n_);
  for (const Entry& e : entries_) out.insert(out.end(), e.frequency, e.value);
  return out;
}

}  // namespace genum
