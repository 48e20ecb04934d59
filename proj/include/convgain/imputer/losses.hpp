#pragma once

#include <Eigen/Dense>

#include "convgain/data/dataset.hpp"

namespace convgain::imputer {

using data::Matrix;
using ConstRef = Eigen::Ref<const Matrix>;

/// Probabilities are clamped to [kProbabilityFloor, 1 - kProbabilityFloor]
/// before taking logs.
inline constexpr double kProbabilityFloor = 1e-8;

/// -sum (1 - M) log(M_hat) + alpha * sum_{M = 1} (X - g)^2.
/// X may hold NaN where M = 0.
double generator_loss(const ConstRef& mask, const ConstRef& predicted_mask, const ConstRef& generated,
                      const ConstRef& x, double alpha);

/// Adversarial part of the generator loss only: -sum (1 - M) log(M_hat).
double generator_adversarial_loss(const ConstRef& mask, const ConstRef& predicted_mask);

/// Reconstruction part only: sum_{M = 1} (X - g)^2 (not weighted by alpha).
double reconstruction_loss(const ConstRef& mask, const ConstRef& generated, const ConstRef& x);

/// -sum [M log(M_hat) + (1 - M) log(1 - M_hat)].
double discriminator_loss(const ConstRef& mask, const ConstRef& predicted_mask);

/// d generator_adversarial_loss / d M_hat (zero where the clamp is active).
Matrix generator_adversarial_gradient(const ConstRef& mask, const ConstRef& predicted_mask);

/// d (alpha * reconstruction_loss) / d g.
Matrix reconstruction_gradient(const ConstRef& mask, const ConstRef& generated, const ConstRef& x,
                               double alpha);

/// d discriminator_loss / d M_hat (zero where the clamp is active).
Matrix discriminator_gradient(const ConstRef& mask, const ConstRef& predicted_mask);

}  // namespace convgain::imputer
