#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "convgain/baselines/baselines.hpp"
#include "convgain/data/synth.hpp"
#include "convgain/eval/rectangles.hpp"
#include "convgain/imputer/trainer.hpp"

namespace convgain::eval {

enum class Method { mi, pca, gain, conv_gain, conv_gain_no_coords };

std::string to_string(Method method);
/// "mi", "pca", "gain", "conv-gain", "conv-gain-nc" (or "conv-gain-no-coords").
Method method_from_string(const std::string& name);
std::vector<Method> methods_from_list(const std::string& comma_separated);
bool is_adversarial(Method method);
imputer::Preset preset_for(Method method);

enum class MaskMode { structured, mcar };

std::string to_string(MaskMode mode);
MaskMode mask_mode_from_string(const std::string& name);

/// Completes `masked` with one method; `seed` replaces train.seed for the
/// adversarial methods. Observed entries come back bit-exact.
data::Matrix run_method(Method method, const data::SurgeDataset& masked,
                        const imputer::TrainConfig& train, const baselines::PcaConfig& pca,
                        std::uint64_t seed);

struct BenchmarkConfig {
  std::vector<Method> methods{Method::mi, Method::pca, Method::gain, Method::conv_gain};
  std::vector<double> rate_bins{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  Index storms_per_bin = 5;
  Index repetitions = 5;
  std::uint64_t seed = 0;
  MaskMode mask_mode = MaskMode::structured;
  double rate_tolerance = 0.005;
  /// Template for the storms; each storm is storm_variant(synth, derived seed).
  data::SynthConfig synth;
  imputer::TrainConfig train;
  /// Replaces `train` for the listed methods.
  std::map<Method, imputer::TrainConfig> method_train;
  baselines::PcaConfig pca;
  Index rectangle_t_min = 5;
  Index rectangle_s_min = 40;
  /// Worker threads; results do not depend on it.
  Index jobs = 1;

  const imputer::TrainConfig& train_for(Method method) const;
  void validate() const;
};

struct StormInfo {
  Index bin = 0;    // index into rate_bins
  Index storm = 0;  // index within the bin
  std::uint64_t synth_seed = 0;
  double delta = 0.0;  // NaN for MCAR masks
  double achieved_rate = 0.0;
  bool unreachable = false;
  StructureReport structure;
};

struct CellResult {
  Method method = Method::mi;
  Index bin = 0;
  Index storm = 0;
  Index repetition = 0;
  std::uint64_t seed = 0;
  double rmse = 0.0;  // NaN when the method failed
  bool observed_preserved = true;
  std::string error;
};

struct RmseReport {
  Method method = Method::mi;
  double rate_bin = 0.0;
  std::vector<double> per_storm;       // mean over repetitions
  std::vector<double> per_repetition;  // mean over storms
  double mean = 0.0;                   // over all successful cells
  double median = 0.0;                 // of per_repetition
  Index repetitions = 1;
  Index failures = 0;
};

struct BenchmarkResult {
  std::vector<StormInfo> storms;
  std::vector<CellResult> cells;
  std::vector<RmseReport> reports;  // method-major, then bin

  const RmseReport& report(Method method, double rate_bin) const;
};

/// Storm synthesis, mask calibration, then every (method, storm, repetition)
/// cell. A failing cell is recorded with its error and NaN RMSE.
BenchmarkResult run_benchmark(const BenchmarkConfig& config);

/// Summary layout: one row per method, one column per rate bin, mean RMSE.
std::string table_csv(const BenchmarkConfig& config, const BenchmarkResult& result);
std::string cells_csv(const BenchmarkConfig& config, const BenchmarkResult& result);
std::string storms_csv(const BenchmarkConfig& config, const BenchmarkResult& result);

double median(std::vector<double> values);

}  // namespace convgain::eval
