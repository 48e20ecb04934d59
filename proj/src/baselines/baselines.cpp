#include "convgain/baselines/baselines.hpp"

namespace convgain::baselines {

void PcaConfig::validate() const {
  require(rank >= 0, "pca: rank must be >= 1 (or 0 for automatic)");
  require(variance_target > 0.0 && variance_target <= 1.0, "pca: variance target must lie in (0, 1]");
  require(tolerance > 0.0, "pca: tolerance must be > 0");
  require(max_iterations >= 1, "pca: max iterations must be >= 1");
}

}  // namespace convgain::baselines
