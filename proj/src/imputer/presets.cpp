#include "convgain/imputer/presets.hpp"

#include <algorithm>

namespace convgain::imputer {

using nn::LayerSpec;

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::gain: return "gain";
    case Preset::conv_gain: return "conv-gain";
    case Preset::conv_gain_no_coords: return "conv-gain-no-coords";
  }
  return "unknown";
}

Preset preset_from_string(const std::string& name) {
  if (name == "gain") return Preset::gain;
  if (name == "conv-gain") return Preset::conv_gain;
  if (name == "conv-gain-no-coords" || name == "conv-gain-nc") return Preset::conv_gain_no_coords;
  throw ValidationError("unknown preset '" + name + "' (expected gain, conv-gain, conv-gain-nc)");
}

bool is_convolutional(Preset preset) { return preset != Preset::gain; }

bool uses_coordinates(Preset preset) { return preset == Preset::conv_gain; }

PatchGeometry default_geometry(Preset preset) {
  if (preset == Preset::gain) return {1, 125, 1, 25};
  return {3, 125, 1, 25};
}

nn::Shape network_input_shape(Preset preset, const PatchGeometry& g) {
  if (!is_convolutional(preset)) return {2 * g.time_window * g.node_window};
  return {2 * g.time_window, g.node_window, uses_coordinates(preset) ? 3 : 1};
}

std::vector<LayerSpec> network_layers(Preset preset, const PatchGeometry& g) {
  g.validate();
  const Index out = g.time_window * g.node_window;
  if (!is_convolutional(preset)) {
    return {LayerSpec::dense(out), LayerSpec::relu(),    LayerSpec::dense(out), LayerSpec::relu(),
            LayerSpec::dense(out), LayerSpec::relu(),    LayerSpec::dense(out), LayerSpec::sigmoid()};
  }
  return {LayerSpec::conv(3, 3, 32), LayerSpec::relu(),      LayerSpec::maxpool(),
          LayerSpec::conv(3, 3, 64), LayerSpec::relu(),      LayerSpec::maxpool(),
          LayerSpec::flatten(),      LayerSpec::dense(1024), LayerSpec::relu(),
          LayerSpec::dense(out),     LayerSpec::sigmoid()};
}

NetworkPair build_networks(Preset preset, const PatchGeometry& geometry, Rng& rng) {
  const auto input = network_input_shape(preset, geometry);
  const auto layers = network_layers(preset, geometry);
  nn::Network generator(input, layers, rng);
  nn::Network discriminator(input, layers, rng);
  return {std::move(generator), std::move(discriminator)};
}

CoordinateScaling CoordinateScaling::fit(const std::vector<data::Node>& nodes) {
  require(!nodes.empty(), "coordinate scaling needs nodes");
  CoordinateScaling c{nodes[0].latitude, nodes[0].latitude, nodes[0].longitude, nodes[0].longitude};
  for (const auto& n : nodes) {
    c.latitude_min = std::min(c.latitude_min, n.latitude);
    c.latitude_max = std::max(c.latitude_max, n.latitude);
    c.longitude_min = std::min(c.longitude_min, n.longitude);
    c.longitude_max = std::max(c.longitude_max, n.longitude);
  }
  return c;
}

namespace {

double scale_into_unit(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }

}  // namespace

double CoordinateScaling::latitude(double lat) const {
  return scale_into_unit(lat, latitude_min, latitude_max);
}

double CoordinateScaling::longitude(double lon) const {
  return scale_into_unit(lon, longitude_min, longitude_max);
}

void write_network_input(nn::TensorD& batch, Index sample, Preset preset, const Patch& patch,
                         const Matrix& values, const Matrix& indicator,
                         const CoordinateScaling& coords) {
  const Index tw = patch.surge.rows(), sw = patch.surge.cols();
  require(values.rows() == tw && values.cols() == sw && indicator.rows() == tw &&
              indicator.cols() == sw,
          "network input planes must match the patch geometry");
  const PatchGeometry g{tw, sw, 1, 1};
  const nn::Shape per_sample = network_input_shape(preset, g);
  require(batch.rank() == static_cast<Index>(per_sample.size()) + 1 && sample < batch.dim(0),
          "network input batch has the wrong rank");
  for (std::size_t a = 0; a < per_sample.size(); ++a) {
    require(batch.dim(static_cast<Index>(a + 1)) == per_sample[a],
            "geometry mismatch: preset " + to_string(preset) + " expects input " +
                nn::shape_string(per_sample) + ", batch is " + nn::shape_string(batch.shape()));
  }
  const Index stride = nn::shape_size(per_sample);
  double* dst = batch.raw() + sample * stride;

  if (!is_convolutional(preset)) {
    for (Index i = 0; i < tw; ++i) {
      for (Index j = 0; j < sw; ++j) {
        dst[i * sw + j] = values(i, j);
        dst[tw * sw + i * sw + j] = indicator(i, j);
      }
    }
    return;
  }
  const Index channels = per_sample[2];
  for (Index r = 0; r < 2 * tw; ++r) {
    const bool upper = r < tw;
    const Index i = upper ? r : r - tw;
    for (Index j = 0; j < sw; ++j) {
      double* px = dst + (r * sw + j) * channels;
      px[0] = upper ? values(i, j) : indicator(i, j);
      if (channels == 3) {
        px[1] = coords.latitude(patch.latitude(i, j));
        px[2] = coords.longitude(patch.longitude(i, j));
      }
    }
  }
}

nn::TensorD assemble_network_input(Preset preset, const Patch& patch, const Matrix& values,
                                   const Matrix& indicator, const CoordinateScaling& coords) {
  nn::Shape shape{1};
  const PatchGeometry g{patch.surge.rows(), patch.surge.cols(), 1, 1};
  for (Index e : network_input_shape(preset, g)) shape.push_back(e);
  nn::TensorD batch(shape);
  write_network_input(batch, 0, preset, patch, values, indicator, coords);
  nn::Shape single(shape.begin() + 1, shape.end());
  return batch.reshaped(single);
}

Matrix values_gradient(const nn::TensorD& input_grad, Index sample, Preset preset, Index tw,
                       Index sw) {
  const nn::Shape per_sample = network_input_shape(preset, {tw, sw, 1, 1});
  const Index stride = nn::shape_size(per_sample);
  const double* src = input_grad.raw() + sample * stride;
  Matrix g(tw, sw);
  if (!is_convolutional(preset)) {
    for (Index i = 0; i < tw; ++i) {
      for (Index j = 0; j < sw; ++j) g(i, j) = src[i * sw + j];
    }
    return g;
  }
  const Index channels = per_sample[2];
  for (Index i = 0; i < tw; ++i) {
    for (Index j = 0; j < sw; ++j) g(i, j) = src[(i * sw + j) * channels];
  }
  return g;
}

}  // namespace convgain::imputer
