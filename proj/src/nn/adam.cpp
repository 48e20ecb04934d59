#include "convgain/nn/adam.hpp"

#include <cmath>

namespace convgain::nn {

void AdamConfig::validate() const {
  require(learning_rate > 0.0, "adam: learning rate must be > 0");
  require(beta1 >= 0.0 && beta1 < 1.0, "adam: beta1 must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "adam: beta2 must lie in [0, 1)");
  require(epsilon > 0.0, "adam: epsilon must be > 0");
}

AdamState::AdamState(AdamConfig config) : config_(config) { config_.validate(); }

void adam_step(std::span<TensorD* const> params, AdamState& state) {
  if (state.m_.empty()) {
    for (const auto* p : params) {
      state.m_.push_back(Eigen::VectorXd::Zero(p->size()));
      state.v_.push_back(Eigen::VectorXd::Zero(p->size()));
    }
  }
  require(state.m_.size() == params.size(), "adam: parameter count changed between steps");
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(state.m_[i].size() == params[i]->size(), "adam: parameter shape changed");
    if (params[i]->has_grad() && !params[i]->grad().allFinite()) {
      throw TrainingDiverged("adam: non-finite gradient in parameter " + std::to_string(i));
    }
  }

  const AdamConfig& c = state.config_;
  state.step_ += 1;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    TensorD& p = *params[i];
    if (!p.has_grad()) continue;
    const auto& g = p.grad();
    auto& m = state.m_[i];
    auto& v = state.v_[i];
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseAbs2();
    p.data().array() -= c.learning_rate * (m.array() / correction1) /
                        ((v.array() / correction2).sqrt() + c.epsilon);
  }
}

}  // namespace convgain::nn
