#include "convgain/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace convgain::nn {

namespace {

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / scale;
}

std::vector<Index> pick_entries(Index total, Index limit, Rng& rng) {
  std::vector<Index> picked;
  if (limit == 0 || limit >= total) {
    picked.resize(static_cast<std::size_t>(total));
    for (Index i = 0; i < total; ++i) picked[static_cast<std::size_t>(i)] = i;
    return picked;
  }
  std::set<Index> chosen;
  while (static_cast<Index>(chosen.size()) < limit) {
    chosen.insert(static_cast<Index>(rng.below(static_cast<std::uint64_t>(total))));
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

GradCheckResult grad_check(Network& net, const TensorD& input, const LossFunction& loss,
                           const GradCheckOptions& options) {
  require(options.epsilon > 0.0, "grad_check: epsilon must be > 0");
  net.zero_grad();
  TensorD output = net.forward_train(input);
  TensorD grad_output(output.shape());
  loss(output, &grad_output);
  const TensorD input_grad = net.backward(grad_output);

  auto params = net.parameters();
  std::vector<Index> offsets{0};
  for (auto* p : params) offsets.push_back(offsets.back() + p->size());

  Rng rng(options.seed);
  GradCheckResult result;
  const double eps = options.epsilon;

  auto probe = [&](double& slot, double analytic, const TensorD& x) {
    const double saved = slot;
    slot = saved + eps;
    const double up = loss(net.forward(x), nullptr);
    slot = saved - eps;
    const double down = loss(net.forward(x), nullptr);
    slot = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double err = relative_error(analytic, numeric);
    if (err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_analytic = analytic;
      result.worst_numeric = numeric;
    }
    ++result.entries_checked;
  };

  for (Index flat : pick_entries(offsets.back(), options.max_entries, rng)) {
    const auto which = static_cast<std::size_t>(
        std::upper_bound(offsets.begin(), offsets.end(), flat) - offsets.begin() - 1);
    TensorD& p = *params[which];
    const Index local = flat - offsets[which];
    probe(p.data()[local], p.grad()[local], input);
  }

  if (options.include_input) {
    TensorD x = input;
    for (Index i : pick_entries(x.size(), options.max_entries, rng)) {
      probe(x.data()[i], input_grad[i], x);
    }
  }
  return result;
}

}  // namespace convgain::nn
