#include "convgain/eval/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "convgain/data/masks.hpp"
#include "convgain/eval/csv.hpp"
#include "convgain/eval/metrics.hpp"

namespace convgain::eval {

namespace {

constexpr std::uint64_t kStormTag = 1;
constexpr std::uint64_t kMcarTag = 2;
constexpr std::uint64_t kRepetitionTag = 3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Seeds are keyed on the bin's rate, not its position, so a storm and its
/// repetitions do not change when other bins are added or dropped.
std::uint64_t bin_key(double rate) { return std::bit_cast<std::uint64_t>(rate); }

struct Storm {
  data::SurgeDataset truth;
  data::SurgeDataset masked;
};

struct Task {
  Method method;
  std::size_t storm;  // index into storms
  Index repetition;   // -1: deterministic method, fills every repetition
};

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::mi: return "mi";
    case Method::pca: return "pca";
    case Method::gain: return "gain";
    case Method::conv_gain: return "conv-gain";
    case Method::conv_gain_no_coords: return "conv-gain-nc";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "mi") return Method::mi;
  if (name == "pca") return Method::pca;
  if (name == "gain") return Method::gain;
  if (name == "conv-gain") return Method::conv_gain;
  if (name == "conv-gain-nc" || name == "conv-gain-no-coords") return Method::conv_gain_no_coords;
  throw ValidationError("unknown method '" + name + "' (expected mi, pca, gain, conv-gain, conv-gain-nc)");
}

std::vector<Method> methods_from_list(const std::string& comma_separated) {
  std::vector<Method> out;
  std::stringstream ss(comma_separated);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(method_from_string(item));
  }
  require(!out.empty(), "method list is empty");
  return out;
}

bool is_adversarial(Method method) { return method != Method::mi && method != Method::pca; }

imputer::Preset preset_for(Method method) {
  switch (method) {
    case Method::gain: return imputer::Preset::gain;
    case Method::conv_gain: return imputer::Preset::conv_gain;
    case Method::conv_gain_no_coords: return imputer::Preset::conv_gain_no_coords;
    default: throw ValidationError("method " + to_string(method) + " has no network preset");
  }
}

std::string to_string(MaskMode mode) { return mode == MaskMode::structured ? "structured" : "mcar"; }

MaskMode mask_mode_from_string(const std::string& name) {
  if (name == "structured") return MaskMode::structured;
  if (name == "mcar") return MaskMode::mcar;
  throw ValidationError("unknown mask mode '" + name + "' (expected structured or mcar)");
}

data::Matrix run_method(Method method, const data::SurgeDataset& masked,
                        const imputer::TrainConfig& train, const baselines::PcaConfig& pca,
                        std::uint64_t seed) {
  switch (method) {
    case Method::mi: return baselines::mean_impute(masked.surge, masked.mask);
    case Method::pca: return baselines::pca_impute(masked.surge, masked.mask, pca).completed;
    default: break;
  }
  imputer::TrainConfig cfg = train;
  cfg.seed = seed;
  const auto trained = imputer::train(masked, cfg, preset_for(method));
  return imputer::impute(trained.model, masked).completed;
}

const imputer::TrainConfig& BenchmarkConfig::train_for(Method method) const {
  const auto it = method_train.find(method);
  return it == method_train.end() ? train : it->second;
}

void BenchmarkConfig::validate() const {
  require(!methods.empty(), "bench: no methods");
  require(!rate_bins.empty(), "bench: no rate bins");
  for (double r : rate_bins) require(r > 0.0 && r < 1.0, "bench: rate bins must lie in (0, 1)");
  require(storms_per_bin >= 1, "bench: storms per bin must be >= 1");
  require(repetitions >= 1, "bench: repetitions must be >= 1");
  require(rate_tolerance > 0.0, "bench: rate tolerance must be > 0");
  require(jobs >= 1, "bench: jobs must be >= 1");
  synth.validate();
  train.validate();
  for (const auto& [method, cfg] : method_train) cfg.validate();
  pca.validate();
}

const RmseReport& BenchmarkResult::report(Method method, double rate_bin) const {
  for (const auto& r : reports) {
    if (r.method == method && r.rate_bin == rate_bin) return r;
  }
  throw ValidationError("no report for " + to_string(method) + " at rate " + format_number(rate_bin));
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
  config.validate();
  BenchmarkResult result;
  std::vector<Storm> storms;
  for (std::size_t b = 0; b < config.rate_bins.size(); ++b) {
    const double rate = config.rate_bins[b];
    for (Index k = 0; k < config.storms_per_bin; ++k) {
      StormInfo info;
      info.bin = static_cast<Index>(b);
      info.storm = k;
      info.synth_seed = derive_seed(config.seed, {kStormTag, bin_key(rate), static_cast<std::uint64_t>(k)});
      Storm storm;
      storm.truth = data::synthesize_surge(data::storm_variant(config.synth, info.synth_seed));
      data::MaskMatrix mask;
      if (config.mask_mode == MaskMode::structured) {
        const auto cal = data::calibrate_delta(storm.truth, rate, config.rate_tolerance);
        info.delta = cal.delta;
        info.unreachable = cal.unreachable;
        mask = data::generate_structured_mask(storm.truth, cal.delta);
      } else {
        info.delta = kNaN;
        mask = data::generate_mcar_mask(
            storm.truth.n_t(), storm.truth.n_s(), rate,
            derive_seed(config.seed, {kMcarTag, bin_key(rate), static_cast<std::uint64_t>(k)}));
      }
      info.achieved_rate = data::missing_rate(mask);
      storm.masked = data::apply_mask(storm.truth, mask);
      info.structure = count_rectangles(storm.masked, config.rectangle_t_min, config.rectangle_s_min);
      result.storms.push_back(std::move(info));
      storms.push_back(std::move(storm));
    }
  }

  std::vector<Task> tasks;
  for (Method m : config.methods) {
    for (std::size_t s = 0; s < storms.size(); ++s) {
      if (!is_adversarial(m)) {
        tasks.push_back({m, s, -1});
        continue;
      }
      for (Index r = 0; r < config.repetitions; ++r) tasks.push_back({m, s, r});
    }
  }

  std::vector<std::vector<CellResult>> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      const StormInfo& info = result.storms[task.storm];
      const Storm& storm = storms[task.storm];
      const Index rep = std::max<Index>(task.repetition, 0);
      CellResult cell;
      cell.method = task.method;
      cell.bin = info.bin;
      cell.storm = info.storm;
      cell.seed = derive_seed(config.seed, {kRepetitionTag, bin_key(config.rate_bins[info.bin]),
                                            static_cast<std::uint64_t>(info.storm),
                                            static_cast<std::uint64_t>(rep)});
      try {
        const data::Matrix completed =
            run_method(task.method, storm.masked, config.train_for(task.method), config.pca, cell.seed);
        cell.observed_preserved =
            observed_preserved(completed, storm.masked.surge, storm.masked.mask);
        cell.rmse = rmse_missing(completed, storm.truth.surge, storm.masked.mask);
      } catch (const std::exception& e) {
        cell.rmse = kNaN;
        cell.error = e.what();
      }
      if (task.repetition >= 0) {
        cell.repetition = task.repetition;
        outcomes[i].push_back(cell);
      } else {
        for (Index r = 0; r < config.repetitions; ++r) {
          cell.repetition = r;
          outcomes[i].push_back(cell);
        }
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::min<Index>(config.jobs, static_cast<Index>(tasks.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& o : outcomes) {
    for (auto& c : o) result.cells.push_back(std::move(c));
  }

  for (Method m : config.methods) {
    for (std::size_t b = 0; b < config.rate_bins.size(); ++b) {
      RmseReport rep;
      rep.method = m;
      rep.rate_bin = config.rate_bins[b];
      rep.repetitions = config.repetitions;
      const auto n_storm = static_cast<std::size_t>(config.storms_per_bin);
      const auto n_rep = static_cast<std::size_t>(config.repetitions);
      std::vector<double> storm_sum(n_storm, 0.0), rep_sum(n_rep, 0.0);
      std::vector<Index> storm_n(n_storm, 0), rep_n(n_rep, 0);
      double total = 0.0;
      Index total_n = 0;
      for (const auto& c : result.cells) {
        if (c.method != m || c.bin != static_cast<Index>(b)) continue;
        if (std::isnan(c.rmse)) {
          ++rep.failures;
          continue;
        }
        const auto s = static_cast<std::size_t>(c.storm), r = static_cast<std::size_t>(c.repetition);
        storm_sum[s] += c.rmse;
        ++storm_n[s];
        rep_sum[r] += c.rmse;
        ++rep_n[r];
        total += c.rmse;
        ++total_n;
      }
      for (std::size_t s = 0; s < n_storm; ++s) {
        rep.per_storm.push_back(storm_n[s] > 0 ? storm_sum[s] / storm_n[s] : kNaN);
      }
      for (std::size_t r = 0; r < n_rep; ++r) {
        rep.per_repetition.push_back(rep_n[r] > 0 ? rep_sum[r] / rep_n[r] : kNaN);
      }
      rep.mean = total_n > 0 ? total / total_n : kNaN;
      rep.median = median(rep.per_repetition);
      result.reports.push_back(std::move(rep));
    }
  }
  return result;
}

std::string table_csv(const BenchmarkConfig& config, const BenchmarkResult& result) {
  std::ostringstream out;
  out << "method";
  for (double r : config.rate_bins) out << ',' << "rate_" << format_number(r);
  out << '\n';
  for (Method m : config.methods) {
    out << to_string(m);
    for (double r : config.rate_bins) out << ',' << format_number(result.report(m, r).mean);
    out << '\n';
  }
  return out.str();
}

std::string cells_csv(const BenchmarkConfig& config, const BenchmarkResult& result) {
  std::ostringstream out;
  out << "method,rate_bin,storm,repetition,seed,rmse,observed_preserved,error\n";
  for (const auto& c : result.cells) {
    out << to_string(c.method) << ',' << format_number(config.rate_bins[static_cast<std::size_t>(c.bin)])
        << ',' << c.storm << ',' << c.repetition << ',' << c.seed << ',' << format_number(c.rmse)
        << ',' << (c.observed_preserved ? 1 : 0) << ',' << csv_field(c.error) << '\n';
  }
  return out.str();
}

std::string storms_csv(const BenchmarkConfig& config, const BenchmarkResult& result) {
  std::ostringstream out;
  out << "rate_bin,storm,synth_seed,mask,delta,achieved_rate,unreachable,rectangles,largest_area\n";
  for (const auto& s : result.storms) {
    out << format_number(config.rate_bins[static_cast<std::size_t>(s.bin)]) << ',' << s.storm << ','
        << s.synth_seed << ',' << to_string(config.mask_mode) << ',' << format_number(s.delta)
        << ',' << format_number(s.achieved_rate) << ',' << (s.unreachable ? 1 : 0) << ','
        << s.structure.total() << ','
        << (s.structure.empty() ? 0 : s.structure.counts.rbegin()->first) << '\n';
  }
  return out.str();
}

}  // namespace convgain::eval
