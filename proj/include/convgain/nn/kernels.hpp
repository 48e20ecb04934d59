#pragma once

#include <vector>

#include "convgain/nn/tensor.hpp"

// Batched layer kernels. Image tensors are [N, H, W, C] (a rank-3 [H, W, C]
// input is treated as a batch of one and returned at rank 3); vectors are
// [N, F] or [F]. All loops run in a fixed order so results are bit-reproducible.

namespace convgain::nn {

/// Filters are [kh, kw, Cin, Cout], bias is [Cout]. Zero "same" padding; only
/// odd filter extents are accepted. When `cols` is given the im2col matrix
/// (N*H*W rows, kh*kw*Cin columns) is stored there for the backward pass.
TensorD conv2d_forward(const TensorD& input, const TensorD& filters, const TensorD& bias,
                       bool same_padding = true, RowMatrix<double>* cols = nullptr);

/// Parameter gradients are left empty when `parameter_gradients` is false.
struct ConvGradients {
  TensorD input;
  TensorD filters;
  TensorD bias;
};

ConvGradients conv2d_backward(const RowMatrix<double>& cols, const Shape& input_shape,
                              const TensorD& filters, const TensorD& grad_output,
                              bool parameter_gradients = true);

struct PoolOutput {
  TensorD output;
  /// Flat input offset of the selected element, one per output element.
  std::vector<Index> argmax;
};

/// 2x2 max pooling, stride 2, ceil mode: trailing odd rows/columns form
/// partial windows. Ties keep the first element in row-major window order.
PoolOutput maxpool2_forward(const TensorD& input);

TensorD maxpool2_backward(const Shape& input_shape, const std::vector<Index>& argmax,
                          const TensorD& grad_output);

/// out = input * weights + bias with weights [in, out].
TensorD dense_forward(const TensorD& input, const TensorD& weights, const TensorD& bias);

struct DenseGradients {
  TensorD input;
  TensorD weights;
  TensorD bias;
};

DenseGradients dense_backward(const TensorD& input, const TensorD& weights,
                              const TensorD& grad_output, bool parameter_gradients = true);

enum class Activation { relu, sigmoid };

TensorD activation(const TensorD& x, Activation kind);

/// `saved` is the forward input for relu and the forward output for sigmoid.
TensorD activation_backward(const TensorD& saved, Activation kind, const TensorD& grad_output);

}  // namespace convgain::nn
