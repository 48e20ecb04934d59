#include "convgain/imputer/trainer.hpp"

#include <cmath>
#include <numeric>

#include "convgain/imputer/losses.hpp"
#include "convgain/imputer/masking.hpp"

namespace convgain::imputer {

namespace {

constexpr std::uint64_t kInitTag = 0x1D17;
constexpr std::uint64_t kTrainTag = 0x7A11;
constexpr std::uint64_t kImputeTag = 0x1417;

using RowMajor = nn::RowMatrix<double>;

Eigen::RowVectorXd flatten(const Matrix& m) {
  Eigen::RowVectorXd row(m.size());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) row[i * m.cols() + j] = m(i, j);
  }
  return row;
}

Matrix unflatten(const Eigen::Ref<const Eigen::RowVectorXd>& row, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = row[i * cols + j];
  }
  return m;
}

Matrix tensor_rows(const nn::TensorD& t) {
  const Index n = t.dim(0);
  return t.matrix(n, t.size() / n);
}

nn::TensorD rows_tensor(const Matrix& m) {
  nn::TensorD t({m.rows(), m.cols()});
  t.matrix(m.rows(), m.cols()) = m;
  return t;
}

void require_compatible(const data::SurgeDataset& ds, const PatchGeometry& g, Preset preset) {
  require(ds.n_t() >= g.time_window && ds.n_s() >= g.node_window,
          "geometry incompatible: preset " + to_string(preset) + " needs at least " +
              std::to_string(g.time_window) + " time steps and " + std::to_string(g.node_window) +
              " nodes, dataset is " + std::to_string(ds.n_t()) + " x " + std::to_string(ds.n_s()));
}

/// Training view of one storm: normalised values and mask in locality order.
struct TrainingData {
  data::SurgeDataset normalized;
  std::vector<Index> order;
};

nn::TensorD network_batch(Preset preset, const nn::Network& net, const TrainingBatch& batch,
                          const Matrix& values, const Matrix& indicator,
                          const CoordinateScaling& coords, const PatchGeometry& g) {
  nn::Shape shape{static_cast<Index>(batch.patches.size())};
  for (Index e : net.input_shape()) shape.push_back(e);
  nn::TensorD input(shape);
  for (Index k = 0; k < shape[0]; ++k) {
    write_network_input(input, k, preset, batch.patches[static_cast<std::size_t>(k)],
                        unflatten(values.row(k), g.time_window, g.node_window),
                        unflatten(indicator.row(k), g.time_window, g.node_window), coords);
  }
  return input;
}

void check_loss(double value, const char* which, Index iteration) {
  if (!std::isfinite(value)) {
    throw TrainingDiverged(std::string(which) + " loss became non-finite at iteration " +
                           std::to_string(iteration));
  }
}

}  // namespace

TrainingBatch draw_training_batch(const data::SurgeDataset& normalized,
                                  const std::vector<Index>& node_order, const PatchGeometry& g,
                                  Index size, double noise_scale, double hint_rate, Rng& rng) {
  require(size >= 1, "batch size must be >= 1");
  require_compatible(normalized, g, Preset::conv_gain);
  const Index width = g.time_window * g.node_window;
  TrainingBatch batch;
  batch.x.resize(size, width);
  batch.m.resize(size, width);
  batch.z.resize(size, width);
  const auto t_range = static_cast<std::uint64_t>(normalized.n_t() - g.time_window + 1);
  const auto s_range = static_cast<std::uint64_t>(normalized.n_s() - g.node_window + 1);
  for (Index k = 0; k < size; ++k) {
    const auto t0 = static_cast<Index>(rng.below(t_range));
    const auto s0 = static_cast<Index>(rng.below(s_range));
    Patch p = extract_patch(normalized, node_order, t0, s0, g.time_window, g.node_window);
    batch.m.row(k) = flatten(p.mask);
    batch.x.row(k) = flatten((p.mask.array() == 1.0).select(p.surge, 0.0));
    batch.patches.push_back(std::move(p));
  }
  for (Index k = 0; k < size; ++k) {
    for (Index j = 0; j < width; ++j) batch.z(k, j) = noise_scale * rng.uniform();
  }
  batch.b = sample_reveal(size, width, hint_rate, rng);
  return batch;
}

double discriminator_objective(GainModel& model, const TrainingBatch& batch, bool backprop) {
  const PatchGeometry& g = model.geometry;
  const auto n = static_cast<double>(batch.patches.size());
  const Matrix u = intermediate_imputation(batch.x, batch.m, batch.z);
  const Matrix generated = tensor_rows(model.generator.forward(
      network_batch(model.preset, model.generator, batch, u, batch.m, model.coordinates, g)));
  const Matrix v = final_imputation(batch.x, batch.m, generated);
  const Matrix h = hint_matrix(batch.m, batch.b);
  const nn::TensorD d_input =
      network_batch(model.preset, model.discriminator, batch, v, h, model.coordinates, g);
  const Matrix predicted = tensor_rows(backprop ? model.discriminator.forward_train(d_input)
                                                : model.discriminator.forward(d_input));
  const double loss = discriminator_loss(batch.m, predicted) / n;
  if (backprop) {
    model.discriminator.backward(rows_tensor(discriminator_gradient(batch.m, predicted) / n));
  }
  return loss;
}

GeneratorLosses generator_objective(GainModel& model, const TrainingBatch& batch, bool backprop) {
  const PatchGeometry& g = model.geometry;
  const double alpha = model.config.alpha;
  const auto n = static_cast<double>(batch.patches.size());
  const Matrix u = intermediate_imputation(batch.x, batch.m, batch.z);
  const nn::TensorD g_input =
      network_batch(model.preset, model.generator, batch, u, batch.m, model.coordinates, g);
  const Matrix generated = tensor_rows(backprop ? model.generator.forward_train(g_input)
                                                : model.generator.forward(g_input));
  const Matrix v = final_imputation(batch.x, batch.m, generated);
  const Matrix h = hint_matrix(batch.m, batch.b);
  const nn::TensorD d_input =
      network_batch(model.preset, model.discriminator, batch, v, h, model.coordinates, g);
  const Matrix predicted = tensor_rows(backprop ? model.discriminator.forward_train(d_input)
                                                : model.discriminator.forward(d_input));

  GeneratorLosses losses;
  losses.adversarial = generator_adversarial_loss(batch.m, predicted) / n;
  losses.reconstruction = reconstruction_loss(batch.m, generated, batch.x) / n;
  losses.total = losses.adversarial + alpha * losses.reconstruction;
  if (!backprop) return losses;

  // dL/dV flows back through D (its parameters stay untouched); V takes g
  // only where M = 0.
  const nn::TensorD d_v = model.discriminator.backward(
      rows_tensor(generator_adversarial_gradient(batch.m, predicted) / n), false);
  Matrix d_generated = reconstruction_gradient(batch.m, generated, batch.x, alpha) / n;
  for (Index k = 0; k < d_generated.rows(); ++k) {
    const Eigen::RowVectorXd dv =
        flatten(values_gradient(d_v, k, model.preset, g.time_window, g.node_window));
    for (Index j = 0; j < d_generated.cols(); ++j) {
      if (batch.m(k, j) == 0.0) d_generated(k, j) += dv[j];
    }
  }
  model.generator.backward(rows_tensor(d_generated));
  return losses;
}

void TrainConfig::validate() const {
  require(alpha >= 0.0, "train: alpha must be >= 0");
  require(hint_rate >= 0.0 && hint_rate <= 1.0, "train: hint rate must lie in [0, 1]");
  require(noise_scale >= 0.0, "train: noise scale must be >= 0");
  require(discriminator_batch >= 1 && generator_batch >= 1, "train: k_D and k_G must be >= 1");
  require(iterations >= 0, "train: iterations must be >= 0");
  require(convergence_window >= 1, "train: convergence window must be >= 1");
  require(convergence_tolerance >= 0.0, "train: convergence tolerance must be >= 0");
  require(inference_batch >= 1, "train: inference batch must be >= 1");
  adam.validate();
  if (geometry) geometry->validate();
}

PatchGeometry TrainConfig::geometry_for(Preset preset) const {
  return geometry ? *geometry : default_geometry(preset);
}

GainModel initialize_model(const data::SurgeDataset& ds, const TrainConfig& config, Preset preset) {
  config.validate();
  ds.validate();
  GainModel model;
  model.preset = preset;
  model.geometry = config.geometry_for(preset);
  require_compatible(ds, model.geometry, preset);
  model.normalization = data::fit_normalization(ds);
  model.coordinates = CoordinateScaling::fit(ds.nodes);
  model.config = config;
  Rng rng(derive_seed(config.seed, {kInitTag}));
  auto nets = build_networks(preset, model.geometry, rng);
  model.generator = std::move(nets.generator);
  model.discriminator = std::move(nets.discriminator);
  return model;
}

bool loss_plateaued(const std::vector<double>& trace, Index window, double tolerance) {
  const auto w = static_cast<std::size_t>(window);
  if (trace.size() < 2 * w) return false;
  const auto end = trace.end();
  const double recent = std::accumulate(end - static_cast<std::ptrdiff_t>(w), end, 0.0) / w;
  const double before = std::accumulate(end - static_cast<std::ptrdiff_t>(2 * w),
                                        end - static_cast<std::ptrdiff_t>(w), 0.0) / w;
  return std::abs(recent - before) <= tolerance * std::max(std::abs(before), 1e-12);
}

TrainResult train(const data::SurgeDataset& ds, const TrainConfig& config, Preset preset,
                  const TrainProgress& progress) {
  require(ds.n_t() >= 1 && ds.n_s() >= 1, "train: empty dataset");
  require(ds.missing_count() < ds.mask.size(), "train: every entry is missing");
  TrainResult result{initialize_model(ds, config, preset), {}};
  GainModel& model = result.model;
  const PatchGeometry& g = model.geometry;

  TrainingData td{data::normalize(ds).dataset, data::order_nodes(ds)};
  Rng rng(derive_seed(config.seed, {kTrainTag}));
  nn::AdamState adam_d(config.adam);
  nn::AdamState adam_g(config.adam);
  auto params_d = model.discriminator.parameters();
  auto params_g = model.generator.parameters();

  for (Index it = 0; it < config.iterations; ++it) {
    {
      const TrainingBatch batch =
          draw_training_batch(td.normalized, td.order, g, config.discriminator_batch,
                              config.noise_scale, config.hint_rate, rng);
      model.discriminator.zero_grad();
      const double loss = discriminator_objective(model, batch, true);
      check_loss(loss, "discriminator", it);
      nn::adam_step(params_d, adam_d);
      result.history.discriminator.push_back(loss);
    }
    {
      const TrainingBatch batch = draw_training_batch(td.normalized, td.order, g,
                                                      config.generator_batch, config.noise_scale,
                                                      config.hint_rate, rng);
      model.generator.zero_grad();
      const GeneratorLosses losses = generator_objective(model, batch, true);
      check_loss(losses.total, "generator", it);
      nn::adam_step(params_g, adam_g);
      result.history.generator.push_back(losses.total);
      result.history.reconstruction.push_back(losses.reconstruction);
    }
    if (progress) progress(it, model, result.history);
    if (loss_plateaued(result.history.generator, config.convergence_window,
                       config.convergence_tolerance)) {
      result.history.converged = true;
      break;
    }
  }
  if (!model.generator.all_finite() || !model.discriminator.all_finite()) {
    throw TrainingDiverged("network parameters became non-finite");
  }
  for (auto* p : model.generator.parameters()) p->drop_grad();
  for (auto* p : model.discriminator.parameters()) p->drop_grad();
  return result;
}

Imputation impute(const GainModel& model, const data::SurgeDataset& ds) {
  ds.validate();
  const PatchGeometry& g = model.geometry;
  require_compatible(ds, g, model.preset);

  data::SurgeDataset normalized = ds;
  normalized.surge = data::normalize_values(ds.surge, model.normalization);
  const auto order = data::order_nodes(ds);
  const auto patches = extract_patches(normalized, g, order);

  Rng rng(derive_seed(model.config.seed, {kImputeTag}));
  std::vector<Matrix> predictions;
  predictions.reserve(patches.size());
  const auto chunk = static_cast<std::size_t>(model.config.inference_batch);
  for (std::size_t start = 0; start < patches.size(); start += chunk) {
    const std::size_t stop = std::min(patches.size(), start + chunk);
    TrainingBatch batch;
    batch.patches.assign(patches.begin() + static_cast<std::ptrdiff_t>(start),
                         patches.begin() + static_cast<std::ptrdiff_t>(stop));
    const auto n = static_cast<Index>(stop - start);
    const Index width = g.time_window * g.node_window;
    batch.x.resize(n, width);
    batch.m.resize(n, width);
    batch.z.resize(n, width);
    for (Index k = 0; k < n; ++k) {
      const Patch& p = batch.patches[static_cast<std::size_t>(k)];
      batch.m.row(k) = flatten(p.mask);
      batch.x.row(k) = flatten((p.mask.array() == 1.0).select(p.surge, 0.0));
      for (Index j = 0; j < width; ++j) batch.z(k, j) = model.config.noise_scale * rng.uniform();
    }
    const Matrix u = intermediate_imputation(batch.x, batch.m, batch.z);
    const Matrix generated = tensor_rows(model.generator.forward(
        network_batch(model.preset, model.generator, batch, u, batch.m, model.coordinates, g)));
    for (Index k = 0; k < n; ++k) {
      predictions.push_back(unflatten(generated.row(k), g.time_window, g.node_window));
    }
  }
  const Matrix assembled = assemble_patches(patches, predictions, order, ds.n_t(), ds.n_s());
  const Matrix physical = data::denormalize_values(assembled, model.normalization);

  Imputation out{ds.surge, ds.mask};
  for (Index s = 0; s < ds.n_s(); ++s) {
    for (Index t = 0; t < ds.n_t(); ++t) {
      if (ds.mask(t, s) != 1.0) out.completed(t, s) = physical(t, s);
    }
  }
  return out;
}

}  // namespace convgain::imputer
