#pragma once

#include "convgain/data/dataset.hpp"

namespace convgain::data {

/// Min-max scaling statistics fitted on observed entries only.
struct NormStats {
  double minimum = 0.0;
  double maximum = 1.0;
  /// All observed values equal: everything maps to 0.5.
  bool degenerate = false;

  double range() const { return maximum - minimum; }
  bool operator==(const NormStats&) const = default;
};

NormStats fit_normalization(const SurgeDataset& ds);

template <typename Derived>
Matrix normalize_values(const Eigen::MatrixBase<Derived>& x, const NormStats& stats) {
  if (stats.degenerate) return Matrix::Constant(x.rows(), x.cols(), 0.5);
  return ((x.array() - stats.minimum) / stats.range()).matrix();
}

template <typename Derived>
Matrix denormalize_values(const Eigen::MatrixBase<Derived>& y, const NormStats& stats) {
  if (stats.degenerate) return Matrix::Constant(y.rows(), y.cols(), stats.minimum);
  return (stats.minimum + y.array() * stats.range()).matrix();
}

struct NormalizedDataset {
  SurgeDataset dataset;  // observed entries in [0, 1], missing entries still NaN
  NormStats stats;
};

NormalizedDataset normalize(const SurgeDataset& ds);

}  // namespace convgain::data
