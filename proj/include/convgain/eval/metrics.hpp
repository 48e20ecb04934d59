#pragma once

#include <cmath>

#include "convgain/data/dataset.hpp"

namespace convgain::eval {

using data::Index;

/// Root mean squared error over the entries with mask == 0.
template <typename DerivedA, typename DerivedB, typename DerivedM>
double rmse_missing(const Eigen::MatrixBase<DerivedA>& imputed,
                    const Eigen::MatrixBase<DerivedB>& truth,
                    const Eigen::MatrixBase<DerivedM>& mask) {
  require(imputed.rows() == truth.rows() && imputed.cols() == truth.cols() &&
              mask.rows() == truth.rows() && mask.cols() == truth.cols(),
          "rmse: shape mismatch");
  double sum = 0.0;
  Index n = 0;
  for (Index j = 0; j < mask.cols(); ++j) {
    for (Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) != 0.0) continue;
      const double e = static_cast<double>(imputed(i, j)) - static_cast<double>(truth(i, j));
      sum += e * e;
      ++n;
    }
  }
  require(n > 0, "rmse: no missing entries to score");
  return std::sqrt(sum / static_cast<double>(n));
}

/// True when every entry with mask == 1 has the same bit pattern in both
/// matrices.
bool observed_preserved(const data::Matrix& output, const data::Matrix& input,
                        const data::MaskMatrix& mask);

}  // namespace convgain::eval
