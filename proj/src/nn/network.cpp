#include "convgain/nn/network.hpp"

#include <cmath>

namespace convgain::nn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void glorot_fill(TensorD& t, Index fan_in, Index fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Index i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
}

}  // namespace

Network::Network(Shape input_shape, std::vector<LayerSpec> specs, Rng& rng)
    : input_shape_(std::move(input_shape)), specs_(std::move(specs)) {
  require(!input_shape_.empty(), "network input shape must not be empty");
  for (Index e : input_shape_) require(e >= 1, "network input extents must be positive");
  Shape shape = input_shape_;
  layers_.reserve(specs_.size());
  for (const auto& spec : specs_) {
    const Shape next = spec.output_shape(shape);
    switch (spec.kind) {
      case LayerKind::conv2d: {
        Conv2dLayer layer(spec.filter_height, spec.filter_width, shape[2], spec.out_channels);
        const Index area = spec.filter_height * spec.filter_width;
        glorot_fill(layer.filters, area * shape[2], area * spec.out_channels, rng);
        layers_.emplace_back(std::move(layer));
        break;
      }
      case LayerKind::maxpool2: layers_.emplace_back(MaxPool2Layer{}); break;
      case LayerKind::dense: {
        DenseLayer layer(shape[0], spec.out_features);
        glorot_fill(layer.weights, shape[0], spec.out_features, rng);
        layers_.emplace_back(std::move(layer));
        break;
      }
      case LayerKind::relu: layers_.emplace_back(ActivationLayer(Activation::relu)); break;
      case LayerKind::sigmoid: layers_.emplace_back(ActivationLayer(Activation::sigmoid)); break;
      case LayerKind::flatten: layers_.emplace_back(FlattenLayer{}); break;
    }
    shape = next;
  }
}

std::vector<Shape> Network::shape_chain() const {
  std::vector<Shape> chain{input_shape_};
  for (const auto& spec : specs_) chain.push_back(spec.output_shape(chain.back()));
  return chain;
}

Shape Network::output_shape() const { return shape_chain().back(); }

void Network::check_input(const TensorD& batch) const {
  require(batch.rank() == static_cast<Index>(input_shape_.size()) + 1,
          "network input must be [N, " + shape_string(input_shape_) + "], got " +
              shape_string(batch.shape()));
  for (std::size_t i = 0; i < input_shape_.size(); ++i) {
    require(batch.dim(static_cast<Index>(i + 1)) == input_shape_[i],
            "network input must be [N, " + shape_string(input_shape_) + "], got " +
                shape_string(batch.shape()));
  }
}

TensorD Network::forward(const TensorD& batch) const {
  check_input(batch);
  TensorD x = batch;
  for (const auto& layer : layers_) {
    x = std::visit([&](const auto& l) { return l.forward(x); }, layer);
  }
  return x;
}

TensorD Network::forward_train(const TensorD& batch) {
  check_input(batch);
  TensorD x = batch;
  for (auto& layer : layers_) {
    x = std::visit([&](auto& l) { return l.forward_train(x); }, layer);
  }
  forward_cached_ = true;
  return x;
}

TensorD Network::backward(const TensorD& grad_output, bool accumulate_param_grads) {
  if (!forward_cached_) throw ValidationError("network backward called without a forward pass");
  TensorD g = grad_output;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    g = std::visit([&](auto& l) { return l.backward(g, accumulate_param_grads); }, *it);
  }
  return g;
}

std::vector<TensorD*> Network::parameters() {
  std::vector<TensorD*> params;
  for (auto& layer : layers_) {
    std::visit(overloaded{[&](Conv2dLayer& l) {
                            params.push_back(&l.filters);
                            params.push_back(&l.bias);
                          },
                          [&](DenseLayer& l) {
                            params.push_back(&l.weights);
                            params.push_back(&l.bias);
                          },
                          [](auto&) {}},
               layer);
  }
  return params;
}

std::vector<const TensorD*> Network::parameters() const {
  std::vector<const TensorD*> params;
  for (auto* p : const_cast<Network*>(this)->parameters()) params.push_back(p);
  return params;
}

Index Network::parameter_count() const {
  Index n = 0;
  for (const auto* p : parameters()) n += p->size();
  return n;
}

void Network::zero_grad() {
  for (auto* p : parameters()) {
    p->ensure_grad();
    p->zero_grad();
  }
}

bool Network::all_finite() const {
  for (const auto* p : parameters()) {
    if (!p->all_finite()) return false;
  }
  return true;
}

}  // namespace convgain::nn
