#pragma once

#include <string>
#include <vector>

#include "convgain/imputer/patches.hpp"
#include "convgain/nn/network.hpp"

namespace convgain::imputer {

enum class Preset { gain, conv_gain, conv_gain_no_coords };

std::string to_string(Preset preset);
/// Accepts "gain", "conv-gain", "conv-gain-no-coords" and the short "conv-gain-nc".
Preset preset_from_string(const std::string& name);

bool is_convolutional(Preset preset);
bool uses_coordinates(Preset preset);

/// Default geometry: 3 x 125 windows for the convolutional presets, one time
/// step of 125 nodes for the dense preset (its networks are 125 wide).
PatchGeometry default_geometry(Preset preset);

/// Per-sample network input: [2 T_w, S_w, C] (C = 3 with coordinates, 1
/// without) for the convolutional presets, [2 T_w S_w] for the dense one.
nn::Shape network_input_shape(Preset preset, const PatchGeometry& geometry);

/// Same stack for generator and discriminator. Dense preset: four dense layers
/// of width T_w S_w. Convolutional presets: conv 3x3x32, pool, conv 3x3x64,
/// pool, flatten, dense 1024, dense T_w S_w. ReLU on hidden layers, sigmoid last.
std::vector<nn::LayerSpec> network_layers(Preset preset, const PatchGeometry& geometry);

struct NetworkPair {
  nn::Network generator;
  nn::Network discriminator;
};

NetworkPair build_networks(Preset preset, const PatchGeometry& geometry, Rng& rng);

/// Min-max scaling of node coordinates into [0, 1] for the coordinate planes.
struct CoordinateScaling {
  double latitude_min = 0.0;
  double latitude_max = 1.0;
  double longitude_min = 0.0;
  double longitude_max = 1.0;

  static CoordinateScaling fit(const std::vector<data::Node>& nodes);
  double latitude(double lat) const;
  double longitude(double lon) const;
  bool operator==(const CoordinateScaling&) const = default;
};

/// Writes one sample of network input into `batch` at position `sample`.
/// `values` is U (generator) or V (discriminator); `indicator` is M or H.
/// Channel 0 stacks [values; indicator] along time, channels 1 and 2 carry the
/// scaled latitude/longitude planes over all 2 T_w rows.
void write_network_input(nn::TensorD& batch, Index sample, Preset preset, const Patch& patch,
                         const Matrix& values, const Matrix& indicator,
                         const CoordinateScaling& coords);

/// Single-sample convenience wrapper around write_network_input.
nn::TensorD assemble_network_input(Preset preset, const Patch& patch, const Matrix& values,
                                   const Matrix& indicator, const CoordinateScaling& coords);

/// Gradient of the input tensor restricted to the `values` block, as a
/// T_w x S_w matrix for `sample`.
Matrix values_gradient(const nn::TensorD& input_grad, Index sample, Preset preset,
                       Index time_window, Index node_window);

}  // namespace convgain::imputer
