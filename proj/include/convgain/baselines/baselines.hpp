#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <string>

#include "convgain/errors.hpp"

namespace convgain::baselines {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Mean imputation: missing entries (M == 0) take the mean of the observed
/// entries in their column; columns with nothing observed take the global
/// observed mean. Observed entries are copied unchanged.
template <typename DerivedX, typename DerivedM>
MatrixX<typename DerivedX::Scalar> mean_impute(const Eigen::MatrixBase<DerivedX>& x,
                                               const Eigen::MatrixBase<DerivedM>& mask) {
  using Scalar = typename DerivedX::Scalar;
  require(x.rows() == mask.rows() && x.cols() == mask.cols(), "mean_impute: shape mismatch");
  const Eigen::Index rows = x.rows(), cols = x.cols();

  Scalar global_sum = 0;
  Eigen::Index global_count = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col_mean(cols);
  Eigen::VectorXi col_count(cols);
  for (Eigen::Index s = 0; s < cols; ++s) {
    Scalar sum = 0;
    int count = 0;
    for (Eigen::Index t = 0; t < rows; ++t) {
      if (mask(t, s) == Scalar(1)) {
        sum += x(t, s);
        ++count;
      }
    }
    global_sum += sum;
    global_count += count;
    col_count[s] = count;
    col_mean[s] = count > 0 ? sum / Scalar(count) : Scalar(0);
  }
  require(global_count > 0, "mean_impute: every entry is missing");
  const Scalar global_mean = global_sum / Scalar(global_count);

  MatrixX<Scalar> out = x;
  for (Eigen::Index s = 0; s < cols; ++s) {
    const Scalar fill = col_count[s] > 0 ? col_mean[s] : global_mean;
    for (Eigen::Index t = 0; t < rows; ++t) {
      if (mask(t, s) != Scalar(1)) out(t, s) = fill;
    }
  }
  return out;
}

struct PcaConfig {
  /// Retained components; 0 picks the smallest rank explaining
  /// `variance_target` of the mean-filled matrix's variance.
  Eigen::Index rank = 0;
  double variance_target = 0.95;
  /// Stop when the Frobenius norm of the change in imputed entries drops below this.
  double tolerance = 1e-6;
  int max_iterations = 500;

  void validate() const;
};

template <typename Scalar>
struct PcaResult {
  MatrixX<Scalar> completed;
  int iterations = 0;
  Eigen::Index rank = 0;
  bool converged = true;
  double last_change = 0.0;
};

/// Smallest rank whose leading singular values of the column-centred matrix
/// explain at least `variance_target` of the total squared norm (>= 1).
template <typename Derived>
Eigen::Index explained_variance_rank(const Eigen::MatrixBase<Derived>& filled,
                                     double variance_target) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> centred = filled.rowwise() - filled.colwise().mean();
  Eigen::BDCSVD<MatrixX<Scalar>> svd(centred);
  if (svd.info() != Eigen::Success) throw NumericalError("pca: SVD failed while choosing rank");
  const auto energy = svd.singularValues().array().square().eval();
  const double total = static_cast<double>(energy.sum());
  if (!(total > 0.0)) return 1;
  double acc = 0.0;
  for (Eigen::Index r = 0; r < energy.size(); ++r) {
    acc += static_cast<double>(energy[r]);
    if (acc >= variance_target * total) return r + 1;
  }
  return energy.size();
}

/// Iterative PCA imputation: start from mean imputation, then repeat
/// {centre columns, rank-r SVD reconstruction, overwrite missing entries}
/// until the missing-entry change is below tolerance.
template <typename DerivedX, typename DerivedM>
PcaResult<typename DerivedX::Scalar> pca_impute(const Eigen::MatrixBase<DerivedX>& x,
                                                const Eigen::MatrixBase<DerivedM>& mask,
                                                const PcaConfig& cfg) {
  using Scalar = typename DerivedX::Scalar;
  cfg.validate();
  PcaResult<Scalar> result;
  result.completed = mean_impute(x, mask);
  const Eigen::Index max_rank = std::min(x.rows(), x.cols());
  require(cfg.rank <= max_rank, "pca: rank " + std::to_string(cfg.rank) + " exceeds min(n_t, n_s)=" +
                                    std::to_string(max_rank));
  const auto missing = (mask.array() != Scalar(1)).eval();
  if (!missing.any()) {
    result.rank = cfg.rank;
    return result;
  }
  if (!result.completed.allFinite()) throw NumericalError("pca: non-finite observed values");

  result.rank = cfg.rank > 0 ? cfg.rank : explained_variance_rank(result.completed, cfg.variance_target);
  const Eigen::Index r = result.rank;
  result.converged = false;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const auto mean = result.completed.colwise().mean().eval();
    const MatrixX<Scalar> centred = result.completed.rowwise() - mean;
    Eigen::BDCSVD<MatrixX<Scalar>> svd(centred, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("pca: SVD failed");
    MatrixX<Scalar> recon = svd.matrixU().leftCols(r) *
                            svd.singularValues().head(r).asDiagonal() *
                            svd.matrixV().leftCols(r).transpose();
    recon.rowwise() += mean;
    if (!recon.allFinite()) throw NumericalError("pca: reconstruction is not finite");

    const MatrixX<Scalar> updated = missing.select(recon, result.completed);
    result.last_change = static_cast<double>((updated - result.completed).norm());
    result.completed = updated;
    result.iterations = it;
    if (result.last_change < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace convgain::baselines
