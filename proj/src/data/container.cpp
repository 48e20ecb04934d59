#include "convgain/data/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace convgain::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDatasetFormat = "convgain-surge-dataset";
constexpr int kVersion = 1;

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) {
    return bits;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return out;
  }
}

}  // namespace

fs::path blob_path_for(const fs::path& header_path) {
  fs::path blob = header_path;
  blob.replace_extension(".bin");
  if (blob == header_path) blob += ".bin";
  return blob;
}

void write_container(const fs::path& header_path, json header, std::span<const double> blob) {
  const fs::path blob_path = blob_path_for(header_path);
  header["blob"] = blob_path.filename().string();
  header["blob_values"] = blob.size();
  header["byte_order"] = "little-endian";
  header["value_type"] = "float64";

  if (header_path.has_parent_path()) fs::create_directories(header_path.parent_path());
  {
    std::ofstream out(blob_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + blob_path.string());
    std::vector<std::uint64_t> words(blob.size());
    for (std::size_t i = 0; i < blob.size(); ++i) {
      words[i] = to_little_endian(std::bit_cast<std::uint64_t>(blob[i]));
    }
    out.write(reinterpret_cast<const char*>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    if (!out) throw IoError("failed writing " + blob_path.string());
  }
  std::ofstream out(header_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + header_path.string());
  out << header.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + header_path.string());
}

Container read_container(const fs::path& header_path) {
  std::ifstream in(header_path);
  if (!in) throw IoError("cannot open " + header_path.string());
  Container c;
  try {
    c.header = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid header " + header_path.string() + ": " + e.what());
  }
  require(c.header.is_object() && c.header.contains("blob") && c.header["blob"].is_string(),
          "header " + header_path.string() + " does not name a blob");
  require(c.header.value("byte_order", "") == "little-endian" &&
              c.header.value("value_type", "") == "float64",
          "unsupported blob encoding in " + header_path.string());
  const fs::path blob_path = header_path.parent_path() / c.header["blob"].get<std::string>();
  std::ifstream bin(blob_path, std::ios::binary | std::ios::ate);
  if (!bin) throw IoError("cannot open " + blob_path.string());
  const auto bytes = static_cast<std::size_t>(bin.tellg());
  require(bytes % 8 == 0, "blob size is not a multiple of 8 bytes: " + blob_path.string());
  const std::size_t count = bytes / 8;
  require(c.header.value("blob_values", count) == count,
          "blob " + blob_path.string() + " holds " + std::to_string(count) +
              " values, header declares " + c.header["blob_values"].dump());
  std::vector<std::uint64_t> words(count);
  bin.seekg(0);
  bin.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
  if (!bin) throw IoError("failed reading " + blob_path.string());
  c.blob.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    c.blob[i] = std::bit_cast<double>(to_little_endian(words[i]));
  }
  return c;
}

void save_dataset(const SurgeDataset& ds, const fs::path& header_path) {
  ds.validate();
  json header;
  header["format"] = kDatasetFormat;
  header["version"] = kVersion;
  header["orientation"] = "rows=time,cols=nodes";
  header["storage"] = "row-major";
  header["n_t"] = ds.n_t();
  header["n_s"] = ds.n_s();
  header["time_step"] = ds.n_t() > 1 ? ds.times[1] - ds.times[0] : 0.0;
  header["times"] = std::vector<double>(ds.times.data(), ds.times.data() + ds.times.size());
  json nodes = json::array();
  for (const auto& n : ds.nodes) {
    nodes.push_back({{"id", n.id}, {"lat", n.latitude}, {"lon", n.longitude}, {"elev", n.elevation}});
  }
  header["nodes"] = std::move(nodes);
  const auto cells = static_cast<std::size_t>(ds.n_t() * ds.n_s());
  header["sections"] = json::array({{{"name", "surge"}, {"offset", 0}, {"count", cells}},
                                    {{"name", "mask"}, {"offset", cells}, {"count", cells}}});

  std::vector<double> blob;
  blob.reserve(2 * cells);
  for (Index t = 0; t < ds.n_t(); ++t) {
    for (Index s = 0; s < ds.n_s(); ++s) {
      blob.push_back(ds.mask(t, s) == 1.0 ? ds.surge(t, s)
                                          : std::numeric_limits<double>::quiet_NaN());
    }
  }
  for (Index t = 0; t < ds.n_t(); ++t) {
    for (Index s = 0; s < ds.n_s(); ++s) blob.push_back(ds.mask(t, s));
  }
  write_container(header_path, std::move(header), blob);
}

SurgeDataset load_dataset(const fs::path& header_path) {
  Container c = read_container(header_path);
  const json& h = c.header;
  require(h.value("format", "") == kDatasetFormat, "not a surge dataset: " + header_path.string());
  require(h.value("version", 0) == kVersion, "unsupported dataset version");
  require(h.value("orientation", "") == "rows=time,cols=nodes" &&
              h.value("storage", "") == "row-major",
          "unsupported matrix orientation");
  SurgeDataset ds;
  Index n_t = 0, n_s = 0;
  try {
    n_t = h.at("n_t").get<Index>();
    n_s = h.at("n_s").get<Index>();
    const auto times = h.at("times").get<std::vector<double>>();
    ds.times = Eigen::Map<const Eigen::VectorXd>(times.data(), static_cast<Index>(times.size()));
    for (const auto& n : h.at("nodes")) {
      ds.nodes.push_back({n.at("id").get<std::int64_t>(), n.at("lat").get<double>(),
                          n.at("lon").get<double>(), n.at("elev").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed dataset header: " + std::string(e.what()));
  }
  require(n_t >= 1 && n_s >= 1, "dataset dimensions must be positive");
  require(static_cast<Index>(ds.nodes.size()) == n_s,
          "shape mismatch: header declares n_s=" + std::to_string(n_s) + " but lists " +
              std::to_string(ds.nodes.size()) + " nodes");
  const auto cells = static_cast<std::size_t>(n_t * n_s);
  require(c.blob.size() == 2 * cells, "shape mismatch: blob holds " + std::to_string(c.blob.size()) +
                                          " values, expected " + std::to_string(2 * cells));
  ds.surge.resize(n_t, n_s);
  ds.mask.resize(n_t, n_s);
  for (Index t = 0; t < n_t; ++t) {
    for (Index s = 0; s < n_s; ++s) {
      const auto k = static_cast<std::size_t>(t * n_s + s);
      ds.surge(t, s) = c.blob[k];
      ds.mask(t, s) = c.blob[cells + k];
    }
  }
  ds.validate();
  return ds;
}

}  // namespace convgain::data
