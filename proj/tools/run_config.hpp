#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "convgain/config_json.hpp"

namespace convgain::cli {

using data::Index;

struct BenchSettings {
  std::vector<double> bins{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  Index storms = 5;
  Index reps = 5;
  Index jobs = 1;
  std::string mask = "structured";
  std::vector<std::string> methods{"mi", "pca", "gain", "conv-gain"};
  /// Method name -> JSON patch applied over the effective `train` section.
  nlohmann::json method_train = nlohmann::json::object();
};

struct MaskSettings {
  std::string mode = "structured";  // structured | mcar
  double rate = 0.30;
  std::optional<double> delta;      // set: skip calibration
  double tolerance = 0.005;
};

struct StructureSettings {
  Index t_min = 5;
  Index s_min = 40;
  Index area_cutoff = 6000;
};

/// Empty means "not given"; outputs then default into the run directory.
struct PathSettings {
  std::string input;       // dataset read by mask/train/impute/structure/plot, masked dataset for eval
  std::string truth;       // fully observed reference dataset
  std::string imputed;     // completed dataset scored by eval
  std::string checkpoint;  // model to impute with
  std::string output;      // primary output file
};

/// Everything a subcommand may read. Built-in defaults, then the config file,
/// then command-line flags.
struct RunConfig {
  std::string method = "conv-gain";
  std::uint64_t seed = 0;  // master seed; overrides synth.seed and train.seed
  imputer::TrainConfig train;
  baselines::PcaConfig pca;
  data::SynthConfig synth;
  BenchSettings bench;
  MaskSettings mask;
  StructureSettings structure;
  PathSettings paths;

  /// Copies the master seed into the nested configs that carry one.
  void apply_master_seed();
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Defaults overlaid with the JSON file at `path` (if any).
nlohmann::json load_config_json(const std::optional<std::filesystem::path>& path);

}  // namespace convgain::cli
