#pragma once

#include <vector>

#include "convgain/nn/layers.hpp"

namespace convgain::nn {

/// Sequential layer stack operating on batches: input [N, ...input_shape].
class Network {
 public:
  Network() = default;

  /// Builds the stack and draws Glorot-uniform weights, bound
  /// sqrt(6 / (fan_in + fan_out)); biases start at zero.
  Network(Shape input_shape, std::vector<LayerSpec> specs, Rng& rng);

  const Shape& input_shape() const { return input_shape_; }
  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::size_t layer_count() const { return layers_.size(); }

  /// Per-sample shape after each layer, starting with the input shape.
  std::vector<Shape> shape_chain() const;
  Shape output_shape() const;

  /// Inference pass; does not touch any cache.
  TensorD forward(const TensorD& batch) const;

  /// Training pass; caches what backward needs.
  TensorD forward_train(const TensorD& batch);

  /// Back-propagates `grad_output` through the cached pass and returns the
  /// gradient with respect to the input. Parameter gradients are added to the
  /// parameters' grad buffers unless `accumulate_param_grads` is false.
  TensorD backward(const TensorD& grad_output, bool accumulate_param_grads = true);

  std::vector<TensorD*> parameters();
  std::vector<const TensorD*> parameters() const;
  Index parameter_count() const;
  void zero_grad();

  bool all_finite() const;

 private:
  void check_input(const TensorD& batch) const;

  Shape input_shape_;
  std::vector<LayerSpec> specs_;
  std::vector<Layer> layers_;
  bool forward_cached_ = false;
};

}  // namespace convgain::nn
