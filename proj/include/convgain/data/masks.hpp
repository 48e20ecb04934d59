#pragma once

#include <cstdint>

#include "convgain/data/dataset.hpp"

namespace convgain::data {

/// Dry-node rule: (t, s) is missing iff surge(t, s) < elevation(s) + delta.
/// Entries already missing in `ds` stay missing.
MaskMatrix generate_structured_mask(const SurgeDataset& ds, double delta);

struct Calibration {
  double delta = 0.0;
  double achieved_rate = 0.0;
  /// Target not reached within tolerance; delta is the nearest achievable.
  bool unreachable = false;
};

/// Bisection on delta until the structured-mask missing rate is within
/// `tolerance` of `target_rate` or the bracket is narrower than 1e-9 m.
Calibration calibrate_delta(const SurgeDataset& ds, double target_rate, double tolerance = 0.005);

/// iid Bernoulli missingness with probability `rate`.
MaskMatrix generate_mcar_mask(Index rows, Index cols, double rate, std::uint64_t seed);

}  // namespace convgain::data
