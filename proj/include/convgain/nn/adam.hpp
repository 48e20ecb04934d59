#pragma once

#include <span>
#include <vector>

#include "convgain/nn/tensor.hpp"

namespace convgain::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Moment buffers for one parameter set. Buffers are sized on the first step.
class AdamState {
 public:
  explicit AdamState(AdamConfig config = {});

  const AdamConfig& config() const { return config_; }
  long step_count() const { return step_; }
  const std::vector<Eigen::VectorXd>& first_moments() const { return m_; }
  const std::vector<Eigen::VectorXd>& second_moments() const { return v_; }

 private:
  friend void adam_step(std::span<TensorD* const> params, AdamState& state);

  AdamConfig config_;
  long step_ = 0;
  std::vector<Eigen::VectorXd> m_;
  std::vector<Eigen::VectorXd> v_;
};

/// One bias-corrected Adam update using each parameter's grad buffer.
/// Throws TrainingDiverged (before touching anything) on a non-finite gradient.
void adam_step(std::span<TensorD* const> params, AdamState& state);

}  // namespace convgain::nn
