#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace genum {

/// One distinct value together with its number of occurrences.
struct Entry {
  double value;
  std::uint64_t frequency;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/**
 * Canonical univariate sample: distinct finite values in strictly increasing
 * order, each with a positive frequency.
 *
 * A DataSet is immutable once built. Slices share nothing with their parent
 * and can be handed to other threads freely.
 */
class DataSet {
 public:
  /// Coalesces duplicates and sorts. Throws EmptyInput or NonFiniteValue
  /// (the latter carrying the index of the first offending value).
  static DataSet from_values(std::span<const double> values);

  /// Validates and adopts already-canonical entries (strictly increasing
  /// values, frequencies >= 1).
  static DataSet from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t distinct_count() const noexcept { return entries_.size(); }
  std::uint64_t n() const noexcept { return n_; }
  double min_value() const noexcept { return entries_.front().value; }
  double max_value() const noexcept { return entries_.back().value; }
  double range() const noexcept { return max_value() - min_value(); }

  /// Entries with lo < x < hi, the lower end included when lo_inclusive and
  /// the upper end always included. Throws EmptyRange when nothing falls in.
  DataSet slice(double lo, double hi, bool lo_inclusive = false) const;

  /// Entries [begin, end) by position.
  DataSet subrange(std::size_t begin, std::size_t end) const;

  /// Replicates every value `frequency` times, in increasing order.
  std::vector<double> expand() const;

  friend bool operator==(const DataSet&, const DataSet&) = default;

 private:
  DataSet() = default;

  std::vector<Entry> entries_;
  std::uint64_t n_ = 0;
};

}  // namespace genum
