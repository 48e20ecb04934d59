#include "convgain/data/normalize.hpp"

#include <cmath>
#include <limits>

namespace convgain::data {

NormStats fit_normalization(const SurgeDataset& ds) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index s = 0; s < ds.n_s(); ++s) {
    for (Index t = 0; t < ds.n_t(); ++t) {
      if (ds.mask(t, s) != 1.0) continue;
      lo = std::min(lo, ds.surge(t, s));
      hi = std::max(hi, ds.surge(t, s));
    }
  }
  require(std::isfinite(lo), "normalization needs at least one observed entry");
  return {lo, hi, !(hi > lo)};
}

NormalizedDataset normalize(const SurgeDataset& ds) {
  NormalizedDataset out{ds, fit_normalization(ds)};
  Matrix scaled = normalize_values(ds.surge, out.stats);
  out.dataset.surge = (ds.mask.array() == 1.0)
                          .select(scaled, std::numeric_limits<double>::quiet_NaN());
  return out;
}

}  // namespace convgain::data
