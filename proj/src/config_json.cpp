#include "convgain/config_json.hpp"

#include <algorithm>
#include <cstring>

namespace convgain {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  require(j.is_object(), context + ": expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    require(known, context + ": unknown key '" + item.key() + "'");
  }
}

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) j.at(key).get_to(field);
}

}  // namespace

namespace nn {

void to_json(nlohmann::json& j, const AdamConfig& c) {
  j = {{"learning_rate", c.learning_rate},
       {"beta1", c.beta1},
       {"beta2", c.beta2},
       {"epsilon", c.epsilon}};
}

void from_json(const nlohmann::json& j, AdamConfig& c) {
  reject_unknown_keys(j, {"learning_rate", "beta1", "beta2", "epsilon"}, "adam");
  read(j, "learning_rate", c.learning_rate);
  read(j, "beta1", c.beta1);
  read(j, "beta2", c.beta2);
  read(j, "epsilon", c.epsilon);
}

void to_json(nlohmann::json& j, const LayerSpec& s) {
  j = {{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case LayerKind::conv2d:
      j["filter_height"] = s.filter_height;
      j["filter_width"] = s.filter_width;
      j["out_channels"] = s.out_channels;
      j["same_padding"] = s.same_padding;
      break;
    case LayerKind::maxpool2: j["ceil_mode"] = s.ceil_mode; break;
    case LayerKind::dense: j["out_features"] = s.out_features; break;
    default: break;
  }
}

void from_json(const nlohmann::json& j, LayerSpec& s) {
  reject_unknown_keys(j,
                      {"kind", "filter_height", "filter_width", "out_channels", "same_padding",
                       "ceil_mode", "out_features"},
                      "layer");
  s = LayerSpec{};
  s.kind = layer_kind_from_string(j.at("kind").get<std::string>());
  read(j, "filter_height", s.filter_height);
  read(j, "filter_width", s.filter_width);
  read(j, "out_channels", s.out_channels);
  read(j, "same_padding", s.same_padding);
  read(j, "ceil_mode", s.ceil_mode);
  read(j, "out_features", s.out_features);
  s.validate();
}

}  // namespace nn

namespace data {

void to_json(nlohmann::json& j, const TrackPoint& p) {
  j = {{"time_fraction", p.time_fraction}, {"latitude", p.latitude}, {"longitude", p.longitude}};
}

void from_json(const nlohmann::json& j, TrackPoint& p) {
  reject_unknown_keys(j, {"time_fraction", "latitude", "longitude"}, "track point");
  read(j, "time_fraction", p.time_fraction);
  read(j, "latitude", p.latitude);
  read(j, "longitude", p.longitude);
}

void to_json(nlohmann::json& j, const SynthConfig& c) {
  j = {{"time_steps", c.time_steps},
       {"nodes", c.nodes},
       {"time_step_hours", c.time_step_hours},
       {"longitude_min", c.longitude_min},
       {"longitude_max", c.longitude_max},
       {"shore_latitude", c.shore_latitude},
       {"shore_wiggle", c.shore_wiggle},
       {"inland_extent", c.inland_extent},
       {"offshore_extent", c.offshore_extent},
       {"inland_fraction", c.inland_fraction},
       {"inland_slope", c.inland_slope},
       {"offshore_slope", c.offshore_slope},
       {"terrain_roughness", c.terrain_roughness},
       {"track", c.track},
       {"peak_amplitude", c.peak_amplitude},
       {"decay_length", c.decay_length},
       {"pulse_width", c.pulse_width},
       {"pulse_center", c.pulse_center},
       {"negative_amplitude", c.negative_amplitude},
       {"negative_offset", c.negative_offset},
       {"noise_level", c.noise_level},
       {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, SynthConfig& c) {
  reject_unknown_keys(
      j,
      {"time_steps", "nodes", "time_step_hours", "longitude_min", "longitude_max",
       "shore_latitude", "shore_wiggle", "inland_extent", "offshore_extent", "inland_fraction",
       "inland_slope", "offshore_slope", "terrain_roughness", "track", "peak_amplitude",
       "decay_length", "pulse_width", "pulse_center", "negative_amplitude", "negative_offset",
       "noise_level", "seed"},
      "synth");
  read(j, "time_steps", c.time_steps);
  read(j, "nodes", c.nodes);
  read(j, "time_step_hours", c.time_step_hours);
  read(j, "longitude_min", c.longitude_min);
  read(j, "longitude_max", c.longitude_max);
  read(j, "shore_latitude", c.shore_latitude);
  read(j, "shore_wiggle", c.shore_wiggle);
  read(j, "inland_extent", c.inland_extent);
  read(j, "offshore_extent", c.offshore_extent);
  read(j, "inland_fraction", c.inland_fraction);
  read(j, "inland_slope", c.inland_slope);
  read(j, "offshore_slope", c.offshore_slope);
  read(j, "terrain_roughness", c.terrain_roughness);
  read(j, "track", c.track);
  read(j, "peak_amplitude", c.peak_amplitude);
  read(j, "decay_length", c.decay_length);
  read(j, "pulse_width", c.pulse_width);
  read(j, "pulse_center", c.pulse_center);
  read(j, "negative_amplitude", c.negative_amplitude);
  read(j, "negative_offset", c.negative_offset);
  read(j, "noise_level", c.noise_level);
  read(j, "seed", c.seed);
}

void to_json(nlohmann::json& j, const NormStats& s) {
  j = {{"minimum", s.minimum}, {"maximum", s.maximum}, {"degenerate", s.degenerate}};
}

void from_json(const nlohmann::json& j, NormStats& s) {
  reject_unknown_keys(j, {"minimum", "maximum", "degenerate"}, "normalization");
  s.minimum = j.at("minimum").get<double>();
  s.maximum = j.at("maximum").get<double>();
  s.degenerate = j.at("degenerate").get<bool>();
}

}  // namespace data

namespace baselines {

void to_json(nlohmann::json& j, const PcaConfig& c) {
  j = {{"rank", c.rank},
       {"variance_target", c.variance_target},
       {"tolerance", c.tolerance},
       {"max_iterations", c.max_iterations}};
}

void from_json(const nlohmann::json& j, PcaConfig& c) {
  reject_unknown_keys(j, {"rank", "variance_target", "tolerance", "max_iterations"}, "pca");
  read(j, "rank", c.rank);
  read(j, "variance_target", c.variance_target);
  read(j, "tolerance", c.tolerance);
  read(j, "max_iterations", c.max_iterations);
}

}  // namespace baselines

namespace imputer {

void to_json(nlohmann::json& j, const PatchGeometry& g) {
  j = {{"time_window", g.time_window},
       {"node_window", g.node_window},
       {"time_stride", g.time_stride},
       {"node_stride", g.node_stride}};
}

void from_json(const nlohmann::json& j, PatchGeometry& g) {
  reject_unknown_keys(j, {"time_window", "node_window", "time_stride", "node_stride"},
                      "geometry");
  read(j, "time_window", g.time_window);
  read(j, "node_window", g.node_window);
  read(j, "time_stride", g.time_stride);
  read(j, "node_stride", g.node_stride);
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"alpha", c.alpha},
       {"hint_rate", c.hint_rate},
       {"noise_scale", c.noise_scale},
       {"discriminator_batch", c.discriminator_batch},
       {"generator_batch", c.generator_batch},
       {"iterations", c.iterations},
       {"adam", c.adam},
       {"seed", c.seed},
       {"geometry", c.geometry ? nlohmann::json(*c.geometry) : nlohmann::json(nullptr)},
       {"convergence_window", c.convergence_window},
       {"convergence_tolerance", c.convergence_tolerance},
       {"inference_batch", c.inference_batch}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  reject_unknown_keys(j,
                      {"alpha", "hint_rate", "noise_scale", "discriminator_batch",
                       "generator_batch", "iterations", "adam", "seed", "geometry",
                       "convergence_window", "convergence_tolerance", "inference_batch"},
                      "train");
  read(j, "alpha", c.alpha);
  read(j, "hint_rate", c.hint_rate);
  read(j, "noise_scale", c.noise_scale);
  read(j, "discriminator_batch", c.discriminator_batch);
  read(j, "generator_batch", c.generator_batch);
  read(j, "iterations", c.iterations);
  read(j, "adam", c.adam);
  read(j, "seed", c.seed);
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    if (g.is_null()) {
      c.geometry.reset();
    } else {
      PatchGeometry geometry = c.geometry.value_or(PatchGeometry{});
      g.get_to(geometry);
      c.geometry = geometry;
    }
  }
  read(j, "convergence_window", c.convergence_window);
  read(j, "convergence_tolerance", c.convergence_tolerance);
  read(j, "inference_batch", c.inference_batch);
}

void to_json(nlohmann::json& j, const CoordinateScaling& c) {
  j = {{"latitude_min", c.latitude_min},
       {"latitude_max", c.latitude_max},
       {"longitude_min", c.longitude_min},
       {"longitude_max", c.longitude_max}};
}

void from_json(const nlohmann::json& j, CoordinateScaling& c) {
  reject_unknown_keys(j, {"latitude_min", "latitude_max", "longitude_min", "longitude_max"},
                      "coordinates");
  c.latitude_min = j.at("latitude_min").get<double>();
  c.latitude_max = j.at("latitude_max").get<double>();
  c.longitude_min = j.at("longitude_min").get<double>();
  c.longitude_max = j.at("longitude_max").get<double>();
}

}  // namespace imputer

}  // namespace convgain
