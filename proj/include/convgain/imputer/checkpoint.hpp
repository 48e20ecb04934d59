#pragma once

#include <filesystem>

#include "convgain/imputer/trainer.hpp"

namespace convgain::imputer {

/// Writes the model as a data container: the JSON header carries the preset,
/// geometry, normalization and coordinate scaling, the TrainConfig and both
/// layer stacks; the blob holds every parameter tensor, generator first.
void save_model(const GainModel& model, const std::filesystem::path& header_path);

GainModel load_model(const std::filesystem::path& header_path);

}  // namespace convgain::imputer
