#pragma once

#include <string>
#include <variant>
#include <vector>

#include "convgain/nn/kernels.hpp"
#include "convgain/nn/tensor.hpp"
#include "convgain/random.hpp"

namespace convgain::nn {

enum class LayerKind { conv2d, maxpool2, dense, relu, sigmoid, flatten };

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

/// Declarative description of one layer. Only the fields relevant to `kind`
/// are read.
struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  Index filter_height = 3;
  Index filter_width = 3;
  Index out_channels = 1;
  bool same_padding = true;
  bool ceil_mode = true;
  Index out_features = 1;

  static LayerSpec conv(Index filter_height, Index filter_width, Index out_channels);
  static LayerSpec maxpool();
  static LayerSpec dense(Index out_features);
  static LayerSpec relu() { return {LayerKind::relu}; }
  static LayerSpec sigmoid() { return {LayerKind::sigmoid}; }
  static LayerSpec flatten() { return {LayerKind::flatten}; }

  void validate() const;
  /// Per-sample output shape (no batch axis).
  Shape output_shape(const Shape& input) const;

  bool operator==(const LayerSpec&) const = default;
};

class Conv2dLayer {
 public:
  Conv2dLayer(Index filter_height, Index filter_width, Index in_channels, Index out_channels);

  TensorD forward(const TensorD& x) const;
  TensorD forward_train(const TensorD& x);
  TensorD backward(const TensorD& grad_output, bool accumulate_param_grads);

  TensorD filters;  // [kh, kw, Cin, Cout]
  TensorD bias;     // [Cout]

 private:
  RowMatrix<double> cols_;
  Shape input_shape_;
  bool cached_ = false;
};

class MaxPool2Layer {
 public:
  TensorD forward(const TensorD& x) const;
  TensorD forward_train(const TensorD& x);
  TensorD backward(const TensorD& grad_output, bool accumulate_param_grads);

 private:
  std::vector<Index> argmax_;
  Shape input_shape_;
  bool cached_ = false;
};

class DenseLayer {
 public:
  DenseLayer(Index in_features, Index out_features);

  TensorD forward(const TensorD& x) const;
  TensorD forward_train(const TensorD& x);
  TensorD backward(const TensorD& grad_output, bool accumulate_param_grads);

  TensorD weights;  // [in, out]
  TensorD bias;     // [out]

 private:
  TensorD input_;
  bool cached_ = false;
};

class ActivationLayer {
 public:
  explicit ActivationLayer(Activation kind) : kind_(kind) {}

  TensorD forward(const TensorD& x) const;
  TensorD forward_train(const TensorD& x);
  TensorD backward(const TensorD& grad_output, bool accumulate_param_grads);

  Activation kind() const { return kind_; }

 private:
  Activation kind_;
  TensorD saved_;
  bool cached_ = false;
};

class FlattenLayer {
 public:
  TensorD forward(const TensorD& x) const;
  TensorD forward_train(const TensorD& x);
  TensorD backward(const TensorD& grad_output, bool accumulate_param_grads);

 private:
  Shape input_shape_;
  bool cached_ = false;
};

using Layer = std::variant<Conv2dLayer, MaxPool2Layer, DenseLayer, ActivationLayer, FlattenLayer>;

}  // namespace convgain::nn
