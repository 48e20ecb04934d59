#include "convgain/data/masks.hpp"

#include <cmath>
#include <limits>

#include "convgain/random.hpp"

namespace convgain::data {

MaskMatrix generate_structured_mask(const SurgeDataset& ds, double delta) {
  MaskMatrix mask = ds.mask;
  for (Index s = 0; s < ds.n_s(); ++s) {
    const double threshold = ds.nodes[static_cast<std::size_t>(s)].elevation + delta;
    for (Index t = 0; t < ds.n_t(); ++t) {
      if (mask(t, s) == 1.0 && ds.surge(t, s) < threshold) mask(t, s) = 0.0;
    }
  }
  return mask;
}

Calibration calibrate_delta(const SurgeDataset& ds, double target_rate, double tolerance) {
  require(target_rate > 0.0 && target_rate < 1.0, "target missing rate must lie in (0, 1)");
  require(tolerance >= 0.0, "calibration tolerance must be >= 0");

  // Below the smallest surge-minus-elevation nothing new is dry; above the
  // largest everything is.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index s = 0; s < ds.n_s(); ++s) {
    const double elev = ds.nodes[static_cast<std::size_t>(s)].elevation;
    for (Index t = 0; t < ds.n_t(); ++t) {
      if (ds.mask(t, s) != 1.0) continue;
      lo = std::min(lo, ds.surge(t, s) - elev);
      hi = std::max(hi, ds.surge(t, s) - elev);
    }
  }
  require(std::isfinite(lo), "calibration needs observed entries");
  hi += 1.0;

  auto rate_at = [&](double delta) { return missing_rate(generate_structured_mask(ds, delta)); };

  Calibration best{lo, rate_at(lo), true};
  auto consider = [&](double delta, double rate) {
    if (std::abs(rate - target_rate) < std::abs(best.achieved_rate - target_rate)) {
      best = {delta, rate, true};
    }
  };
  consider(hi, rate_at(hi));

  while (hi - lo >= 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double rate = rate_at(mid);
    if (std::abs(rate - target_rate) <= tolerance) return {mid, rate, false};
    consider(mid, rate);
    if (rate < target_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::abs(best.achieved_rate - target_rate) <= tolerance) best.unreachable = false;
  return best;
}

MaskMatrix generate_mcar_mask(Index rows, Index cols, double rate, std::uint64_t seed) {
  require(rows >= 1 && cols >= 1, "mask extents must be positive");
  require(rate >= 0.0 && rate <= 1.0, "missing rate must lie in [0, 1]");
  Rng rng(seed);
  MaskMatrix mask(rows, cols);
  for (Index t = 0; t < rows; ++t) {
    for (Index s = 0; s < cols; ++s) mask(t, s) = rng.bernoulli(rate) ? 0.0 : 1.0;
  }
  return mask;
}

}  // namespace convgain::data
