#include "convgain/imputer/checkpoint.hpp"

#include <algorithm>

#include "convgain/config_json.hpp"
#include "convgain/data/container.hpp"

namespace convgain::imputer {

namespace {

constexpr const char* kFormat = "convgain-model";
constexpr int kVersion = 1;

nlohmann::json describe(const nn::Network& net, std::vector<double>& blob) {
  nlohmann::json params = nlohmann::json::array();
  for (const nn::TensorD* p : net.parameters()) {
    params.push_back({{"shape", p->shape()}, {"offset", blob.size()}});
    blob.insert(blob.end(), p->raw(), p->raw() + p->size());
  }
  return {{"input_shape", net.input_shape()}, {"layers", net.specs()}, {"parameters", params}};
}

nn::Network restore(const nlohmann::json& j, const std::vector<double>& blob,
                    const std::string& which) {
  Rng unused(0);
  nn::Network net(j.at("input_shape").get<nn::Shape>(),
                  j.at("layers").get<std::vector<nn::LayerSpec>>(), unused);
  const auto& params = j.at("parameters");
  auto targets = net.parameters();
  require(params.size() == targets.size(),
          "checkpoint: " + which + " parameter count does not match its layer stack");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto shape = params[k].at("shape").get<nn::Shape>();
    const auto offset = params[k].at("offset").get<std::size_t>();
    require(shape == targets[k]->shape(), "checkpoint: " + which + " parameter " +
                                              std::to_string(k) + " has shape " +
                                              nn::shape_string(shape) + ", expected " +
                                              nn::shape_string(targets[k]->shape()));
    const auto n = static_cast<std::size_t>(targets[k]->size());
    require(offset + n <= blob.size(), "checkpoint: blob is too short");
    std::copy_n(blob.begin() + static_cast<std::ptrdiff_t>(offset), n, targets[k]->raw());
  }
  return net;
}

}  // namespace

void save_model(const GainModel& model, const std::filesystem::path& header_path) {
  std::vector<double> blob;
  nlohmann::json header = {{"format", kFormat},
                           {"version", kVersion},
                           {"preset", to_string(model.preset)},
                           {"geometry", model.geometry},
                           {"normalization", model.normalization},
                           {"coordinates", model.coordinates},
                           {"train_config", model.config}};
  header["generator"] = describe(model.generator, blob);
  header["discriminator"] = describe(model.discriminator, blob);
  data::write_container(header_path, std::move(header), blob);
}

GainModel load_model(const std::filesystem::path& header_path) {
  const data::Container c = data::read_container(header_path);
  const auto& h = c.header;
  require(h.value("format", "") == kFormat,
          "checkpoint: " + header_path.string() + " is not a model checkpoint");
  require(h.value("version", 0) == kVersion, "checkpoint: unsupported version");
  GainModel model;
  try {
    model.preset = preset_from_string(h.at("preset").get<std::string>());
    model.geometry = h.at("geometry").get<PatchGeometry>();
    model.normalization = h.at("normalization").get<data::NormStats>();
    model.coordinates = h.at("coordinates").get<CoordinateScaling>();
    model.config = h.at("train_config").get<TrainConfig>();
    model.generator = restore(h.at("generator"), c.blob, "generator");
    model.discriminator = restore(h.at("discriminator"), c.blob, "discriminator");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("checkpoint: malformed header: " + std::string(e.what()));
  }
  return model;
}

}  // namespace convgain::imputer
