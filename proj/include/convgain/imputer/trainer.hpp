#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "convgain/data/normalize.hpp"
#include "convgain/imputer/presets.hpp"
#include "convgain/nn/adam.hpp"

namespace convgain::imputer {

struct TrainConfig {
  double alpha = 10.0;        // reconstruction weight
  double hint_rate = 0.9;     // P(B = 1)
  double noise_scale = 0.01;  // Z ~ Uniform[0, noise_scale]
  Index discriminator_batch = 64;
  Index generator_batch = 64;
  Index iterations = 2000;
  nn::AdamConfig adam;
  std::uint64_t seed = 0;
  /// Unset means the preset's default geometry.
  std::optional<PatchGeometry> geometry;
  /// Stop early when the mean generator loss over the trailing window changes
  /// by less than this (relative) against the window before it.
  Index convergence_window = 100;
  double convergence_tolerance = 1e-4;
  /// Patches per forward pass at imputation time.
  Index inference_batch = 64;

  void validate() const;
  PatchGeometry geometry_for(Preset preset) const;
};

/// Trained (or freshly initialised) generator/discriminator pair plus what is
/// needed to apply it to the storm it was fitted on.
struct GainModel {
  Preset preset = Preset::conv_gain;
  PatchGeometry geometry;
  nn::Network generator;
  nn::Network discriminator;
  data::NormStats normalization;
  CoordinateScaling coordinates;
  TrainConfig config;
};

struct LossHistory {
  std::vector<double> discriminator;
  std::vector<double> generator;       // full generator loss per iteration
  std::vector<double> reconstruction;  // alpha-free reconstruction term
  bool converged = false;
};

struct TrainResult {
  GainModel model;
  LossHistory history;
};

/// Model with initial weights and statistics fitted on `ds`; no training.
GainModel initialize_model(const data::SurgeDataset& ds, const TrainConfig& config, Preset preset);

/// One training sample set: patches with their flattened (row-major,
/// T_w S_w wide) X, M, Z and B, one row per patch. Missing X entries are 0.
struct TrainingBatch {
  std::vector<Patch> patches;
  Matrix x;
  Matrix m;
  Matrix z;
  Matrix b;
};

/// Draws `size` uniformly placed patches of a normalised dataset, then Z and B.
TrainingBatch draw_training_batch(const data::SurgeDataset& normalized,
                                  const std::vector<Index>& node_order, const PatchGeometry& geometry,
                                  Index size, double noise_scale, double hint_rate, Rng& rng);

struct GeneratorLosses {
  double adversarial = 0.0;     // batch mean of -sum (1-M) log D
  double reconstruction = 0.0;  // batch mean of sum M (X - g)^2
  double total = 0.0;           // adversarial + alpha * reconstruction
};

/// Generator objective on a fixed batch with D fixed. With `backprop` the
/// generator's grad buffers receive its gradient; D's buffers are untouched.
GeneratorLosses generator_objective(GainModel& model, const TrainingBatch& batch, bool backprop);

/// Discriminator cross-entropy (batch mean) on a fixed batch with G fixed.
/// With `backprop` D's grad buffers receive its gradient.
double discriminator_objective(GainModel& model, const TrainingBatch& batch, bool backprop);

/// Called after every iteration with the 0-based iteration index.
using TrainProgress = std::function<void(Index iteration, const GainModel& model, const LossHistory& history)>;

/// Alternating min-max training. Each iteration draws a batch of random
/// patches with fresh Z and B, takes one Adam step on the discriminator loss,
/// then a fresh batch and one Adam step on the generator loss with the
/// discriminator fixed. Throws TrainingDiverged on a non-finite loss.
TrainResult train(const data::SurgeDataset& ds, const TrainConfig& config, Preset preset,
                  const TrainProgress& progress = {});

/// True when the trailing-window test says the loss trace has flattened.
bool loss_plateaued(const std::vector<double>& trace, Index window, double tolerance);

struct Imputation {
  data::Matrix completed;         // physical units; observed entries copied bit-exactly
  data::MaskMatrix provenance;    // 1 observed, 0 imputed
};

Imputation impute(const GainModel& model, const data::SurgeDataset& ds);

}  // namespace convgain::imputer
