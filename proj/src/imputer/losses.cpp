#include "convgain/imputer/losses.hpp"

#include <algorithm>
#include <cmath>

namespace convgain::imputer {

namespace {

void check_pair(const ConstRef& a, const ConstRef& b, const char* what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), std::string(what) + ": shape mismatch");
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

bool clamp_active(double p) { return p < kProbabilityFloor || p > 1.0 - kProbabilityFloor; }

void require_finite(const ConstRef& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite input");
}

}  // namespace

double generator_adversarial_loss(const ConstRef& mask, const ConstRef& predicted_mask) {
  check_pair(mask, predicted_mask, "generator_loss");
  require_finite(predicted_mask, "generator_loss");
  double loss = 0.0;
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) == 0.0) loss -= std::log(clamp_probability(predicted_mask(i, j)));
    }
  }
  return loss;
}

double reconstruction_loss(const ConstRef& mask, const ConstRef& generated, const ConstRef& x) {
  check_pair(mask, generated, "reconstruction_loss");
  check_pair(mask, x, "reconstruction_loss");
  require_finite(generated, "reconstruction_loss");
  double loss = 0.0;
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) != 1.0) continue;
      const double r = x(i, j) - generated(i, j);
      if (!std::isfinite(r)) throw ValidationError("reconstruction_loss: non-finite observed value");
      loss += r * r;
    }
  }
  return loss;
}

double generator_loss(const ConstRef& mask, const ConstRef& predicted_mask, const ConstRef& generated,
                      const ConstRef& x, double alpha) {
  require(alpha >= 0.0, "generator_loss: alpha must be >= 0");
  const double adversarial = generator_adversarial_loss(mask, predicted_mask);
  if (alpha == 0.0) return adversarial;
  return adversarial + alpha * reconstruction_loss(mask, generated, x);
}

double discriminator_loss(const ConstRef& mask, const ConstRef& predicted_mask) {
  check_pair(mask, predicted_mask, "discriminator_loss");
  require_finite(predicted_mask, "discriminator_loss");
  double loss = 0.0;
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      const double p = clamp_probability(predicted_mask(i, j));
      const double m = mask(i, j);
      loss -= m * std::log(p) + (1.0 - m) * std::log(1.0 - p);
    }
  }
  return loss;
}

Matrix generator_adversarial_gradient(const ConstRef& mask, const ConstRef& predicted_mask) {
  check_pair(mask, predicted_mask, "generator_adversarial_gradient");
  Matrix g = Matrix::Zero(mask.rows(), mask.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      const double p = predicted_mask(i, j);
      if (mask(i, j) == 0.0 && !clamp_active(p)) g(i, j) = -1.0 / p;
    }
  }
  return g;
}

Matrix reconstruction_gradient(const ConstRef& mask, const ConstRef& generated, const ConstRef& x,
                               double alpha) {
  check_pair(mask, generated, "reconstruction_gradient");
  check_pair(mask, x, "reconstruction_gradient");
  Matrix g = Matrix::Zero(mask.rows(), mask.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) == 1.0) g(i, j) = -2.0 * alpha * (x(i, j) - generated(i, j));
    }
  }
  return g;
}

Matrix discriminator_gradient(const ConstRef& mask, const ConstRef& predicted_mask) {
  check_pair(mask, predicted_mask, "discriminator_gradient");
  Matrix g = Matrix::Zero(mask.rows(), mask.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      const double p = predicted_mask(i, j);
      if (clamp_active(p)) continue;
      const double m = mask(i, j);
      g(i, j) = -m / p + (1.0 - m) / (1.0 - p);
    }
  }
  return g;
}

}  // namespace convgain::imputer
