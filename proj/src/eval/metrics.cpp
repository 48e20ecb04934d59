#include "convgain/eval/metrics.hpp"

#include <cstring>

namespace convgain::eval {

bool observed_preserved(const data::Matrix& output, const data::Matrix& input,
                        const data::MaskMatrix& mask) {
  require(output.rows() == input.rows() && output.cols() == input.cols() &&
              mask.rows() == input.rows() && mask.cols() == input.cols(),
          "observed_preserved: shape mismatch");
  for (Index j = 0; j < mask.cols(); ++j) {
    for (Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) != 1.0) continue;
      const double a = output(i, j), b = input(i, j);
      if (std::memcmp(&a, &b, sizeof(double)) != 0) return false;
    }
  }
  return true;
}

}  // namespace convgain::eval
