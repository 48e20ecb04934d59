// convgain: command-line driver for synthesis, masking, training, imputation,
// scoring, structure analysis, benchmarking and plotting.
//
// Exit codes: 0 success, 1 IO error, 2 validation error, 3 training diverged.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "convgain/data/container.hpp"
#include "convgain/data/masks.hpp"
#include "convgain/eval/benchmark.hpp"
#include "convgain/eval/csv.hpp"
#include "convgain/eval/metrics.hpp"
#include "convgain/eval/plots.hpp"
#include "convgain/imputer/checkpoint.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace convgain;
using data::Index;

namespace {

using Override = std::function<void(json&)>;

/// Flag bound to one or more config keys (JSON pointers). The help text shows
/// the built-in default read from the same keys.
template <typename T>
CLI::Option* config_flag(CLI::App* app, std::vector<Override>& overrides, const std::string& flag,
                         std::vector<std::string> pointers, const std::string& description) {
  static const json defaults = cli::to_json(cli::RunConfig{});
  auto value = std::make_shared<std::optional<T>>();
  overrides.push_back([value, pointers](json& j) {
    if (!*value) return;
    for (const auto& p : pointers) j[json::json_pointer(p)] = **value;
  });
  auto* opt = app->add_option(flag, *value, description);
  const json& d = defaults.at(json::json_pointer(pointers.front()));
  opt->default_str(d.is_string() ? d.get<std::string>() : d.dump());
  return opt;
}

template <typename T>
CLI::Option* config_list(CLI::App* app, std::vector<Override>& overrides, const std::string& flag,
                         const std::string& pointer, const std::string& description) {
  static const json defaults = cli::to_json(cli::RunConfig{});
  auto value = std::make_shared<std::vector<T>>();
  overrides.push_back([value, pointer](json& j) {
    if (!value->empty()) j[json::json_pointer(pointer)] = *value;
  });
  auto* opt = app->add_option(flag, *value, description)->delimiter(',');
  std::string text;
  for (const auto& item : defaults.at(json::json_pointer(pointer))) {
    if (!text.empty()) text += ',';
    text += item.is_string() ? item.get<std::string>() : item.dump();
  }
  opt->default_str(text);
  return opt;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream ss;
  ss << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

/// Output directory of one run. Timestamps go to run.log only, so every other
/// file is a pure function of the inputs.
class RunDir {
 public:
  RunDir(fs::path root, const std::string& command) : path_(std::move(root)), command_(command) {
    std::error_code ec;
    fs::create_directories(path_, ec);
    if (ec) throw IoError("cannot create output directory " + path_.string() + ": " + ec.message());
    log("start " + command_);
  }

  const fs::path& path() const { return path_; }
  fs::path file(const std::string& name) const { return path_ / name; }

  void log(const std::string& message) const {
    std::ofstream out(path_ / "run.log", std::ios::app);
    out << timestamp() << ' ' << message << '\n';
  }

  void echo_config(const cli::RunConfig& config) const {
    eval::write_text_file(file("config.echo"), cli::to_json(config).dump(2) + "\n");
  }

 private:
  fs::path path_;
  std::string command_;
};

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CONVGAIN_OUT"); env && *env) return env;
  return "runs";
}

fs::path output_path(const cli::RunConfig& c, const RunDir& run, const std::string& fallback) {
  return c.paths.output.empty() ? run.file(fallback) : fs::path(c.paths.output);
}

const std::string& required_path(const std::string& value, const char* flag) {
  require(!value.empty(), std::string("missing required input: ") + flag);
  return value;
}

std::string loss_csv(const imputer::LossHistory& h) {
  std::ostringstream out;
  out << "iteration,discriminator,generator,reconstruction\n";
  for (std::size_t i = 0; i < h.generator.size(); ++i) {
    out << i << ',' << eval::format_number(h.discriminator[i]) << ','
        << eval::format_number(h.generator[i]) << ',' << eval::format_number(h.reconstruction[i])
        << '\n';
  }
  return out.str();
}

void write_training_outputs(const RunDir& run, const imputer::TrainResult& trained) {
  eval::write_text_file(run.file("loss.csv"), loss_csv(trained.history));
  eval::write_text_file(run.file("loss.svg"),
                        eval::line_chart_svg("training losses", "iteration",
                                             {{"discriminator", trained.history.discriminator},
                                              {"generator", trained.history.generator},
                                              {"reconstruction", trained.history.reconstruction}}));
}

data::SurgeDataset completed_dataset(const data::SurgeDataset& masked, const data::Matrix& completed) {
  data::SurgeDataset out = masked;
  out.surge = completed;
  out.mask = data::MaskMatrix::Ones(masked.n_t(), masked.n_s());
  return out;
}

// ---- subcommands -----------------------------------------------------------

int cmd_synth(const cli::RunConfig& c, const RunDir& run) {
  const auto ds = data::synthesize_surge(c.synth);
  const fs::path out = output_path(c, run, "storm.json");
  data::save_dataset(ds, out);
  eval::emit_heatmap(ds, run.file("heatmap.svg"), "synthetic storm, seed " + std::to_string(c.seed));
  std::ostringstream m;
  m << "n_t,n_s,surge_min,surge_max\n"
    << ds.n_t() << ',' << ds.n_s() << ',' << eval::format_number(ds.surge.minCoeff()) << ','
    << eval::format_number(ds.surge.maxCoeff()) << '\n';
  eval::write_text_file(run.file("metrics.csv"), m.str());
  std::cout << "wrote " << out.string() << " (" << ds.n_t() << " x " << ds.n_s() << ")\n";
  return 0;
}

int cmd_mask(const cli::RunConfig& c, const RunDir& run) {
  const auto ds = data::load_dataset(required_path(c.paths.input, "--input"));
  data::MaskMatrix mask;
  double delta = std::numeric_limits<double>::quiet_NaN();
  bool unreachable = false;
  if (c.mask.mode == "structured") {
    if (c.mask.delta) {
      delta = *c.mask.delta;
    } else {
      require(c.mask.rate >= 0.0 && c.mask.rate <= 1.0, "mask: --rate must lie in [0, 1]");
      const auto cal = data::calibrate_delta(ds, c.mask.rate, c.mask.tolerance);
      delta = cal.delta;
      unreachable = cal.unreachable;
    }
    mask = data::generate_structured_mask(ds, delta);
  } else if (c.mask.mode == "mcar") {
    mask = data::generate_mcar_mask(ds.n_t(), ds.n_s(), c.mask.rate, derive_seed(c.seed, {0x3CA7}));
  } else {
    throw ValidationError("mask: --mode must be structured or mcar");
  }
  const auto masked = data::apply_mask(ds, mask);
  const fs::path out = output_path(c, run, "masked.json");
  data::save_dataset(masked, out);
  eval::emit_heatmap(masked, run.file("heatmap.svg"), "masked storm");
  const double achieved = masked.missing_rate();
  std::ostringstream m;
  m << "mode,target_rate,delta,achieved_rate,unreachable\n"
    << c.mask.mode << ',' << eval::format_number(c.mask.rate) << ',' << eval::format_number(delta)
    << ',' << eval::format_number(achieved) << ',' << (unreachable ? 1 : 0) << '\n';
  eval::write_text_file(run.file("metrics.csv"), m.str());
  std::cout << "achieved_rate=" << eval::format_number(achieved)
            << " delta=" << eval::format_number(delta) << (unreachable ? " (target unreachable)" : "")
            << "\nwrote " << out.string() << '\n';
  return 0;
}

int cmd_train(const cli::RunConfig& c, const RunDir& run) {
  const auto ds = data::load_dataset(required_path(c.paths.input, "--input"));
  const auto preset = imputer::preset_from_string(c.method);
  const auto trained = imputer::train(ds, c.train, preset);
  const fs::path out = output_path(c, run, "model.json");
  imputer::save_model(trained.model, out);
  write_training_outputs(run, trained);
  std::ostringstream m;
  const auto& h = trained.history;
  m << "preset,iterations_run,converged,final_discriminator,final_generator,final_reconstruction\n"
    << c.method << ',' << h.generator.size() << ',' << (h.converged ? 1 : 0) << ','
    << eval::format_number(h.discriminator.empty() ? std::nan("") : h.discriminator.back()) << ','
    << eval::format_number(h.generator.empty() ? std::nan("") : h.generator.back()) << ','
    << eval::format_number(h.reconstruction.empty() ? std::nan("") : h.reconstruction.back())
    << '\n';
  eval::write_text_file(run.file("metrics.csv"), m.str());
  std::cout << "trained " << c.method << " for " << h.generator.size() << " iterations"
            << (h.converged ? " (loss plateaued)" : "") << "\nwrote " << out.string() << '\n';
  return 0;
}

int cmd_impute(const cli::RunConfig& c, const RunDir& run) {
  const auto ds = data::load_dataset(required_path(c.paths.input, "--input"));
  data::Matrix completed;
  std::string method = c.method;
  if (!c.paths.checkpoint.empty()) {
    const auto model = imputer::load_model(c.paths.checkpoint);
    method = imputer::to_string(model.preset);
    completed = imputer::impute(model, ds).completed;
  } else {
    const auto m = eval::method_from_string(c.method);
    if (eval::is_adversarial(m)) {
      const auto trained = imputer::train(ds, c.train, eval::preset_for(m));
      imputer::save_model(trained.model, run.file("model.json"));
      write_training_outputs(run, trained);
      completed = imputer::impute(trained.model, ds).completed;
    } else {
      completed = eval::run_method(m, ds, c.train, c.pca, c.seed);
    }
  }
  const fs::path out = output_path(c, run, "completed.json");
  const auto result = completed_dataset(ds, completed);
  data::save_dataset(result, out);
  eval::emit_heatmap(result, run.file("heatmap.svg"), "completed by " + method);
  std::ostringstream m;
  m << "method,missing_entries,observed_preserved\n"
    << method << ',' << ds.missing_count() << ','
    << (eval::observed_preserved(completed, ds.surge, ds.mask) ? 1 : 0) << '\n';
  eval::write_text_file(run.file("metrics.csv"), m.str());
  std::cout << "imputed " << ds.missing_count() << " entries with " << method << "\nwrote "
            << out.string() << '\n';
  return 0;
}

int cmd_eval(const cli::RunConfig& c, const RunDir& run) {
  const auto masked = data::load_dataset(required_path(c.paths.input, "--input"));
  const auto truth = data::load_dataset(required_path(c.paths.truth, "--truth"));
  const auto imputed = data::load_dataset(required_path(c.paths.imputed, "--imputed"));
  require(truth.n_t() == masked.n_t() && truth.n_s() == masked.n_s() &&
              imputed.n_t() == masked.n_t() && imputed.n_s() == masked.n_s(),
          "eval: datasets differ in shape");
  require(imputed.missing_count() == 0, "eval: the imputed dataset still has missing entries");
  const double rmse = eval::rmse_missing(imputed.surge, truth.surge, masked.mask);
  std::ostringstream m;
  m << "rmse,missing_entries,missing_rate,observed_preserved\n"
    << eval::format_number(rmse) << ',' << masked.missing_count() << ','
    << eval::format_number(masked.missing_rate()) << ','
    << (eval::observed_preserved(imputed.surge, masked.surge, masked.mask) ? 1 : 0) << '\n';
  eval::write_text_file(run.file("metrics.csv"), m.str());
  std::cout << "rmse=" << eval::format_number(rmse) << '\n';
  return 0;
}

int cmd_structure(const cli::RunConfig& c, const RunDir& run) {
  const auto ds = data::load_dataset(required_path(c.paths.input, "--input"));
  const auto report = eval::count_rectangles(ds, c.structure.t_min, c.structure.s_min);
  const auto all = eval::structure_histogram(report, 0);
  const auto above = eval::structure_histogram(report, c.structure.area_cutoff);
  std::ostringstream csv;
  csv << "area,count\n";
  for (const auto& [area, count] : all) csv << area << ',' << count << '\n';
  eval::write_text_file(output_path(c, run, "structure.csv"), csv.str());

  std::int64_t n_above = 0;
  std::vector<double> counts;
  for (const auto& [area, count] : above) {
    n_above += count;
    counts.push_back(static_cast<double>(count));
  }
  eval::write_text_file(run.file("structure.svg"),
                        eval::line_chart_svg("rectangles with area >= " +
                                                 std::to_string(c.structure.area_cutoff),
                                             "distinct area, ascending", {{"count", counts}}));
  std::ostringstream m;
  m << "t_min,s_min,area_cutoff,rectangles,rectangles_above_cutoff,largest_area\n"
    << c.structure.t_min << ',' << c.structure.s_min << ',' << c.structure.area_cutoff << ','
    << report.total() << ',' << n_above << ','
    << (report.empty() ? 0 : report.counts.rbegin()->first) << '\n';
  eval::write_text_file(run.file("metrics.csv"), m.str());
  std::cout << "rectangles=" << report.total() << " above_cutoff=" << n_above << '\n';
  return 0;
}

int cmd_bench(const cli::RunConfig& c, const RunDir& run) {
  eval::BenchmarkConfig b;
  b.methods.clear();
  for (const auto& name : c.bench.methods) b.methods.push_back(eval::method_from_string(name));
  b.rate_bins = c.bench.bins;
  b.storms_per_bin = c.bench.storms;
  b.repetitions = c.bench.reps;
  b.seed = c.seed;
  b.mask_mode = eval::mask_mode_from_string(c.bench.mask);
  b.rate_tolerance = c.mask.tolerance;
  b.synth = c.synth;
  b.train = c.train;
  for (const auto& [name, patch] : c.bench.method_train.items()) {
    nlohmann::json merged = c.train;
    merged.merge_patch(patch);
    try {
      b.method_train[eval::method_from_string(name)] = merged.get<imputer::TrainConfig>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("bench.method_train." + name + ": " + e.what());
    }
  }
  b.pca = c.pca;
  b.rectangle_t_min = c.structure.t_min;
  b.rectangle_s_min = c.structure.s_min;
  b.jobs = c.bench.jobs;
  const auto result = eval::run_benchmark(b);
  const std::string table = eval::table_csv(b, result);
  eval::write_text_file(output_path(c, run, "table.csv"), table);
  eval::write_text_file(run.file("metrics.csv"), eval::cells_csv(b, result));
  eval::write_text_file(run.file("storms.csv"), eval::storms_csv(b, result));
  for (const auto& cell : result.cells) {
    if (!cell.error.empty()) {
      run.log("cell " + eval::to_string(cell.method) + " storm " + std::to_string(cell.storm) +
              " failed: " + cell.error);
    }
  }
  std::cout << table;
  return 0;
}

int cmd_plot(const cli::RunConfig& c, const RunDir& run, std::optional<std::int64_t> node,
             const std::vector<std::string>& series) {
  const auto ds = data::load_dataset(required_path(c.paths.input, "--input"));
  if (!node) {
    const fs::path out = output_path(c, run, "heatmap.svg");
    eval::emit_heatmap(ds, out);
    std::cout << "wrote " << out.string() << '\n';
    return 0;
  }
  std::optional<data::SurgeDataset> truth;
  if (!c.paths.truth.empty()) truth = data::load_dataset(c.paths.truth);
  std::vector<std::pair<std::string, data::Matrix>> imputed;
  for (const auto& item : series) {
    const auto eq = item.find('=');
    require(eq != std::string::npos && eq > 0, "plot: --series expects name=path, got '" + item + "'");
    const auto completed = data::load_dataset(item.substr(eq + 1));
    imputed.emplace_back(item.substr(0, eq), completed.surge);
  }
  const auto table = eval::make_series(*node, ds, truth ? &*truth : nullptr, imputed);
  const fs::path out = output_path(c, run, "node_" + std::to_string(*node) + ".svg");
  eval::emit_timeseries(table, out);
  std::cout << "wrote " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolutional GAIN imputation of storm-surge time series.\n"
               "Defaults < --config JSON file < flags. Outputs go to <out>/<run>/;\n"
               "<out> defaults to $CONVGAIN_OUT, else ./runs."};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  std::string config_path, out_root, run_name;
  app.add_option("--config", config_path, "JSON config file (see README for the layout)");
  app.add_option("--out", out_root, "output root directory")->default_str("$CONVGAIN_OUT or runs");
  app.add_option("--run", run_name, "run directory name under the output root")
      ->default_str("<subcommand>");

  std::map<CLI::App*, std::vector<Override>> overrides;
  auto common = [&](CLI::App* sub) {
    auto& ov = overrides[sub];
    config_flag<std::uint64_t>(sub, ov, "--seed", {"/seed"}, "master seed");
    config_flag<std::string>(sub, ov, "--output", {"/paths/output"},
                             "primary output file (empty: inside the run directory)");
    return sub;
  };
  auto training = [&](CLI::App* sub) {
    auto& ov = overrides[sub];
    config_flag<std::string>(sub, ov, "--method,--preset", {"/method"},
                             "mi, pca, gain, conv-gain or conv-gain-nc");
    config_flag<Index>(sub, ov, "--iterations", {"/train/iterations"}, "training iterations");
    config_flag<double>(sub, ov, "--alpha", {"/train/alpha"}, "reconstruction weight");
    config_flag<double>(sub, ov, "--hint-rate", {"/train/hint_rate"}, "P(hint reveals M)");
    config_flag<Index>(sub, ov, "--batch", {"/train/discriminator_batch", "/train/generator_batch"},
                       "k_D and k_G (patches per update)");
    config_flag<double>(sub, ov, "--lr", {"/train/adam/learning_rate"}, "Adam learning rate");
    config_flag<double>(sub, ov, "--noise", {"/train/noise_scale"}, "Z ~ Uniform[0, noise]");
    config_flag<Index>(sub, ov, "--pca-rank", {"/pca/rank"}, "PCA rank (0: by explained variance)");
  };

  auto* synth = common(app.add_subcommand("synth", "synthesize a fully observed storm"));
  config_flag<Index>(synth, overrides[synth], "--time-steps", {"/synth/time_steps"}, "time steps");
  config_flag<Index>(synth, overrides[synth], "--nodes", {"/synth/nodes"}, "nodes");

  auto* mask = common(app.add_subcommand("mask", "apply a structured or MCAR missingness mask"));
  config_flag<std::string>(mask, overrides[mask], "--input", {"/paths/input"}, "dataset to mask");
  config_flag<double>(mask, overrides[mask], "--rate", {"/mask/rate"}, "target missing rate");
  config_flag<double>(mask, overrides[mask], "--delta", {"/mask/delta"},
                      "fixed elevation offset in meters (skips calibration)");
  config_flag<std::string>(mask, overrides[mask], "--mode", {"/mask/mode"}, "structured or mcar");
  config_flag<double>(mask, overrides[mask], "--tolerance", {"/mask/tolerance"},
                      "calibration tolerance on the rate");

  auto* train = common(app.add_subcommand("train", "train a GAIN or Conv-GAIN model"));
  config_flag<std::string>(train, overrides[train], "--input", {"/paths/input"}, "masked dataset");
  training(train);

  auto* impute = common(app.add_subcommand("impute", "complete a masked dataset"));
  config_flag<std::string>(impute, overrides[impute], "--input", {"/paths/input"}, "masked dataset");
  config_flag<std::string>(impute, overrides[impute], "--checkpoint", {"/paths/checkpoint"},
                           "trained model (skips training; --method ignored)");
  training(impute);

  auto* evaluate = common(app.add_subcommand("eval", "RMSE of a completed dataset on missing entries"));
  config_flag<std::string>(evaluate, overrides[evaluate], "--input", {"/paths/input"},
                           "masked dataset (defines the missing entries)");
  config_flag<std::string>(evaluate, overrides[evaluate], "--truth", {"/paths/truth"},
                           "fully observed reference");
  config_flag<std::string>(evaluate, overrides[evaluate], "--imputed", {"/paths/imputed"},
                           "completed dataset");

  auto* structure = common(app.add_subcommand("structure", "count all-missing rectangles"));
  config_flag<std::string>(structure, overrides[structure], "--input", {"/paths/input"},
                           "masked dataset");
  config_flag<Index>(structure, overrides[structure], "--t-min", {"/structure/t_min"},
                     "minimum rectangle height (time steps)");
  config_flag<Index>(structure, overrides[structure], "--s-min", {"/structure/s_min"},
                     "minimum rectangle width (nodes)");
  config_flag<Index>(structure, overrides[structure], "--cutoff", {"/structure/area_cutoff"},
                     "area cutoff for the histogram");

  auto* bench = common(app.add_subcommand("bench", "benchmark methods over missing-rate bins"));
  config_list<double>(bench, overrides[bench], "--bins", "/bench/bins", "missing-rate bins");
  config_flag<Index>(bench, overrides[bench], "--storms", {"/bench/storms"}, "storms per bin");
  config_flag<Index>(bench, overrides[bench], "--reps", {"/bench/reps"}, "repetitions per storm");
  config_flag<Index>(bench, overrides[bench], "--jobs", {"/bench/jobs"}, "worker threads");
  config_flag<std::string>(bench, overrides[bench], "--mask", {"/bench/mask"}, "structured or mcar");
  config_list<std::string>(bench, overrides[bench], "--methods", "/bench/methods", "methods to run");
  config_flag<Index>(bench, overrides[bench], "--time-steps", {"/synth/time_steps"}, "time steps per storm");
  config_flag<Index>(bench, overrides[bench], "--nodes", {"/synth/nodes"}, "nodes per storm");
  config_flag<Index>(bench, overrides[bench], "--iterations", {"/train/iterations"},
                     "training iterations");
  config_flag<Index>(bench, overrides[bench], "--batch",
                     {"/train/discriminator_batch", "/train/generator_batch"}, "k_D and k_G");
  config_flag<double>(bench, overrides[bench], "--alpha", {"/train/alpha"}, "reconstruction weight");
  config_flag<double>(bench, overrides[bench], "--lr", {"/train/adam/learning_rate"},
                      "Adam learning rate");

  auto* plot = common(app.add_subcommand("plot", "heat-map, or a node time series with --node"));
  config_flag<std::string>(plot, overrides[plot], "--input", {"/paths/input"}, "dataset");
  config_flag<std::string>(plot, overrides[plot], "--truth", {"/paths/truth"},
                           "reference dataset for the time-series plot");
  std::optional<std::int64_t> node;
  std::vector<std::string> series;
  plot->add_option("--node", node, "node id for a time-series plot");
  plot->add_option("--series", series, "completed datasets as name=path (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    json effective = cli::load_config_json(config_path.empty()
                                               ? std::nullopt
                                               : std::optional<fs::path>(config_path));
    for (auto& apply : overrides[sub]) apply(effective);
    const cli::RunConfig config = cli::run_config_from_json(effective);
    const RunDir run(output_root(out_root) / (run_name.empty() ? sub->get_name() : run_name),
                     sub->get_name());
    run.echo_config(config);

    int code = 0;
    const std::string& name = sub->get_name();
    if (name == "synth") code = cmd_synth(config, run);
    else if (name == "mask") code = cmd_mask(config, run);
    else if (name == "train") code = cmd_train(config, run);
    else if (name == "impute") code = cmd_impute(config, run);
    else if (name == "eval") code = cmd_eval(config, run);
    else if (name == "structure") code = cmd_structure(config, run);
    else if (name == "bench") code = cmd_bench(config, run);
    else if (name == "plot") code = cmd_plot(config, run, node, series);
    run.log("done " + name);
    return code;
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: training diverged: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: bad configuration value: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
