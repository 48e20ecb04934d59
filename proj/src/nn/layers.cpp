#include "convgain/nn/layers.hpp"

namespace convgain::nn {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::maxpool2: return "maxpool2";
    case LayerKind::dense: return "dense";
    case LayerKind::relu: return "relu";
    case LayerKind::sigmoid: return "sigmoid";
    case LayerKind::flatten: return "flatten";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(const std::string& name) {
  for (auto kind : {LayerKind::conv2d, LayerKind::maxpool2, LayerKind::dense, LayerKind::relu,
                    LayerKind::sigmoid, LayerKind::flatten}) {
    if (to_string(kind) == name) return kind;
  }
  throw ValidationError("unknown layer kind '" + name + "'");
}

LayerSpec LayerSpec::conv(Index filter_height, Index filter_width, Index out_channels) {
  LayerSpec s{LayerKind::conv2d};
  s.filter_height = filter_height;
  s.filter_width = filter_width;
  s.out_channels = out_channels;
  return s;
}

LayerSpec LayerSpec::maxpool() { return {LayerKind::maxpool2}; }

LayerSpec LayerSpec::dense(Index out_features) {
  LayerSpec s{LayerKind::dense};
  s.out_features = out_features;
  return s;
}

void LayerSpec::validate() const {
  switch (kind) {
    case LayerKind::conv2d:
      require(filter_height >= 1 && filter_width >= 1, "conv2d: filter extents must be >= 1");
      require(out_channels >= 1, "conv2d: out-channels must be >= 1");
      require(same_padding, "conv2d: only same padding is supported");
      require(filter_height % 2 == 1 && filter_width % 2 == 1,
              "conv2d: same padding needs odd filter extents");
      break;
    case LayerKind::maxpool2:
      require(ceil_mode, "maxpool2: only ceil mode is supported");
      break;
    case LayerKind::dense:
      require(out_features >= 1, "dense: out-features must be >= 1");
      break;
    default:
      break;
  }
}

Shape LayerSpec::output_shape(const Shape& input) const {
  validate();
  switch (kind) {
    case LayerKind::conv2d:
      require(input.size() == 3, "conv2d expects an [H,W,C] input, got " + shape_string(input));
      return {input[0], input[1], out_channels};
    case LayerKind::maxpool2:
      require(input.size() == 3, "maxpool2 expects an [H,W,C] input, got " + shape_string(input));
      return {(input[0] + 1) / 2, (input[1] + 1) / 2, input[2]};
    case LayerKind::dense:
      require(input.size() == 1, "dense expects a flat input, got " + shape_string(input));
      return {out_features};
    case LayerKind::flatten:
      return {shape_size(input)};
    default:
      return input;
  }
}

namespace {

void accumulate(TensorD& param, const TensorD& grad) { param.grad() += grad.data(); }

void require_cache(bool cached, const char* layer) {
  if (!cached) throw ValidationError(std::string(layer) + ": backward called without forward");
}

}  // namespace

// --- conv2d -----------------------------------------------------------------

Conv2dLayer::Conv2dLayer(Index filter_height, Index filter_width, Index in_channels,
                         Index out_channels)
    : filters({filter_height, filter_width, in_channels, out_channels}), bias({out_channels}) {}

TensorD Conv2dLayer::forward(const TensorD& x) const { return conv2d_forward(x, filters, bias); }

TensorD Conv2dLayer::forward_train(const TensorD& x) {
  input_shape_ = x.shape();
  TensorD y = conv2d_forward(x, filters, bias, true, &cols_);
  cached_ = true;
  return y;
}

TensorD Conv2dLayer::backward(const TensorD& grad_output, bool accumulate_param_grads) {
  require_cache(cached_, "conv2d");
  auto g = conv2d_backward(cols_, input_shape_, filters, grad_output, accumulate_param_grads);
  if (accumulate_param_grads) {
    accumulate(filters, g.filters);
    accumulate(bias, g.bias);
  }
  return std::move(g.input);
}

// --- maxpool ----------------------------------------------------------------

TensorD MaxPool2Layer::forward(const TensorD& x) const { return maxpool2_forward(x).output; }

TensorD MaxPool2Layer::forward_train(const TensorD& x) {
  auto pooled = maxpool2_forward(x);
  input_shape_ = x.shape();
  argmax_ = std::move(pooled.argmax);
  cached_ = true;
  return std::move(pooled.output);
}

TensorD MaxPool2Layer::backward(const TensorD& grad_output, bool) {
  require_cache(cached_, "maxpool2");
  return maxpool2_backward(input_shape_, argmax_, grad_output);
}

// --- dense ------------------------------------------------------------------

DenseLayer::DenseLayer(Index in_features, Index out_features)
    : weights({in_features, out_features}), bias({out_features}) {}

TensorD DenseLayer::forward(const TensorD& x) const { return dense_forward(x, weights, bias); }

TensorD DenseLayer::forward_train(const TensorD& x) {
  input_ = x;
  cached_ = true;
  return dense_forward(x, weights, bias);
}

TensorD DenseLayer::backward(const TensorD& grad_output, bool accumulate_param_grads) {
  require_cache(cached_, "dense");
  auto g = dense_backward(input_, weights, grad_output, accumulate_param_grads);
  if (accumulate_param_grads) {
    accumulate(weights, g.weights);
    accumulate(bias, g.bias);
  }
  return std::move(g.input);
}

// --- activations ------------------------------------------------------------

TensorD ActivationLayer::forward(const TensorD& x) const { return activation(x, kind_); }

TensorD ActivationLayer::forward_train(const TensorD& x) {
  TensorD y = activation(x, kind_);
  saved_ = kind_ == Activation::relu ? x : y;
  cached_ = true;
  return y;
}

TensorD ActivationLayer::backward(const TensorD& grad_output, bool) {
  require_cache(cached_, kind_ == Activation::relu ? "relu" : "sigmoid");
  return activation_backward(saved_, kind_, grad_output);
}

// --- flatten ----------------------------------------------------------------

TensorD FlattenLayer::forward(const TensorD& x) const {
  require(x.rank() >= 2, "flatten expects a batched input");
  return x.reshaped({x.dim(0), x.size() / x.dim(0)});
}

TensorD FlattenLayer::forward_train(const TensorD& x) {
  input_shape_ = x.shape();
  cached_ = true;
  return forward(x);
}

TensorD FlattenLayer::backward(const TensorD& grad_output, bool) {
  require_cache(cached_, "flatten");
  return grad_output.reshaped(input_shape_);
}

}  // namespace convgain::nn
