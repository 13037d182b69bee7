#pragma once

#include <utility>

#include "genum/dataset.hpp"

namespace genum {

/// Offset keeping log_cr(x) away from zero for x != 0.
inline constexpr double kLogEpsilon = 2e-16;

/// Logarithm extended to every finite double: 0 maps to 0, and each sign
/// branch is shifted so that the smallest normal magnitude lands near 0.
double log_cr(double x);

/**
 * Parameters of the dataset-adapted log transform. Each branch is anchored
 * at its smallest magnitude and shifted by the smallest positive gap between
 * consecutive log values on that branch.
 */
struct LogMapping {
  double neg_shift = kLogEpsilon;
  double pos_shift = kLogEpsilon;
  double neg_ref = 1.0;
  double pos_ref = 1.0;
  bool has_neg = false;
  bool has_zero = false;
  bool has_pos = false;
  /// Images of the dataset extremes.
  double image_min = 0.0;
  double image_max = 0.0;

  double forward(double x) const;

  friend bool operator==(const LogMapping&, const LogMapping&) = default;
};

/// Transformed dataset (values whose images coincide in double precision are
/// coalesced) and the mapping that produced it.
std::pair<DataSet, LogMapping> log_dataset_cr(const DataSet& d);

/// Inverse of m.forward. Throws OutOfDomain outside [image_min, image_max].
double invert_bound(double y, const LogMapping& m);

}  // namespace genum
