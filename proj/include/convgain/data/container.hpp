#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "convgain/data/dataset.hpp"
#include "json.hpp"

namespace convgain::data {

/// Two-file container: a UTF-8 JSON header plus a little-endian float64 blob.
/// The blob lives next to the header with the extension replaced by ".bin"
/// and is named in the header's "blob" field.
struct Container {
  nlohmann::json header;
  std::vector<double> blob;
};

std::filesystem::path blob_path_for(const std::filesystem::path& header_path);

void write_container(const std::filesystem::path& header_path, nlohmann::json header,
                     std::span<const double> blob);
Container read_container(const std::filesystem::path& header_path);

/// Surge datasets: the blob holds the surge matrix (row-major, time-major,
/// NaN = missing) followed by the mask as 0.0/1.0.
void save_dataset(const SurgeDataset& ds, const std::filesystem::path& header_path);
SurgeDataset load_dataset(const std::filesystem::path& header_path);

}  // namespace convgain::data
