#pragma once

#include <Eigen/Dense>

#include "convgain/data/dataset.hpp"
#include "convgain/random.hpp"

// Masking algebra of the adversarial imputer. Every function accepts any Eigen
// expression and evaluates elementwise; missing entries of X may hold NaN,
// they never leak through because selection is done with the mask, not by
// multiplication.

namespace convgain::imputer {

using data::Matrix;

namespace detail {

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                        const char* what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), std::string(what) + ": shape mismatch");
}

}  // namespace detail

/// U = X o M + Z o (1 - M).
template <typename DX, typename DM, typename DZ>
Matrix intermediate_imputation(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DM>& mask,
                               const Eigen::MatrixBase<DZ>& noise) {
  detail::require_same_shape(x, mask, "intermediate_imputation");
  detail::require_same_shape(x, noise, "intermediate_imputation");
  require(data::is_binary(mask), "intermediate_imputation: mask must be binary");
  return (mask.array() == 1.0).select(x, noise);
}

/// V = X o M + g(U) o (1 - M); observed entries are copied bit-exactly.
template <typename DX, typename DM, typename DG>
Matrix final_imputation(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DM>& mask,
                        const Eigen::MatrixBase<DG>& generated) {
  detail::require_same_shape(x, mask, "final_imputation");
  detail::require_same_shape(x, generated, "final_imputation");
  require(data::is_binary(mask), "final_imputation: mask must be binary");
  return (mask.array() == 1.0).select(x, generated);
}

/// H = B o M + 0.5 (1 - B) for a given binary draw B.
template <typename DM, typename DB>
Matrix hint_matrix(const Eigen::MatrixBase<DM>& mask, const Eigen::MatrixBase<DB>& reveal) {
  detail::require_same_shape(mask, reveal, "hint_matrix");
  require(data::is_binary(reveal), "hint_matrix: B must be binary");
  return (reveal.array() == 1.0).select(mask, Matrix::Constant(mask.rows(), mask.cols(), 0.5));
}

/// B ~ iid Bernoulli(hint_rate), drawn row-major.
inline Matrix sample_reveal(Eigen::Index rows, Eigen::Index cols, double hint_rate, Rng& rng) {
  require(hint_rate >= 0.0 && hint_rate <= 1.0, "hint rate must lie in [0, 1]");
  Matrix b(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) b(i, j) = rng.bernoulli(hint_rate) ? 1.0 : 0.0;
  }
  return b;
}

template <typename DM>
Matrix sample_hint(const Eigen::MatrixBase<DM>& mask, double hint_rate, Rng& rng) {
  return hint_matrix(mask, sample_reveal(mask.rows(), mask.cols(), hint_rate, rng));
}

}  // namespace convgain::imputer
