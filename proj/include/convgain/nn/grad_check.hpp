#pragma once

#include <cstdint>
#include <functional>

#include "convgain/nn/network.hpp"

namespace convgain::nn {

/// Scalar loss of a network output. When `grad_output` is non-null it receives
/// dLoss/dOutput.
using LossFunction = std::function<double(const TensorD& output, TensorD* grad_output)>;

struct GradCheckOptions {
  double epsilon = 1e-5;
  /// 0 checks every parameter entry; otherwise a seeded random subsample.
  Index max_entries = 0;
  bool include_input = false;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  Index entries_checked = 0;
  double worst_analytic = 0.0;  // the pair behind max_relative_error
  double worst_numeric = 0.0;

  bool passed(double tolerance) const { return max_relative_error < tolerance; }
};

/// Compares back-propagated gradients against central finite differences:
/// max |analytic - fd| / max(|analytic|, |fd|, 1e-8).
GradCheckResult grad_check(Network& net, const TensorD& input, const LossFunction& loss,
                           const GradCheckOptions& options = {});

}  // namespace convgain::nn
