#pragma once

#include <initializer_list>
#include <string>

#include "convgain/baselines/baselines.hpp"
#include "convgain/data/normalize.hpp"
#include "convgain/data/synth.hpp"
#include "convgain/imputer/trainer.hpp"
#include "json.hpp"

// JSON mappings for the configuration structs. Reading starts from the
// struct's defaults and overwrites only the keys present; unknown keys are a
// ValidationError so typos in config files do not pass silently.

namespace convgain {

/// Throws ValidationError naming the first key of `j` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context);

}  // namespace convgain

namespace convgain::nn {
void to_json(nlohmann::json& j, const AdamConfig& c);
void from_json(const nlohmann::json& j, AdamConfig& c);
void to_json(nlohmann::json& j, const LayerSpec& s);
void from_json(const nlohmann::json& j, LayerSpec& s);
}  // namespace convgain::nn

namespace convgain::data {
void to_json(nlohmann::json& j, const TrackPoint& p);
void from_json(const nlohmann::json& j, TrackPoint& p);
void to_json(nlohmann::json& j, const SynthConfig& c);
void from_json(const nlohmann::json& j, SynthConfig& c);
void to_json(nlohmann::json& j, const NormStats& s);
void from_json(const nlohmann::json& j, NormStats& s);
}  // namespace convgain::data

namespace convgain::baselines {
void to_json(nlohmann::json& j, const PcaConfig& c);
void from_json(const nlohmann::json& j, PcaConfig& c);
}  // namespace convgain::baselines

namespace convgain::imputer {
void to_json(nlohmann::json& j, const PatchGeometry& g);
void from_json(const nlohmann::json& j, PatchGeometry& g);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const CoordinateScaling& c);
void from_json(const nlohmann::json& j, CoordinateScaling& c);
}  // namespace convgain::imputer
