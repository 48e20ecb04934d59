#include "run_config.hpp"

#include <fstream>

namespace convgain::cli {

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) j.at(key).get_to(field);
}

}  // namespace

void RunConfig::apply_master_seed() {
  synth.seed = seed;
  train.seed = seed;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["method"] = c.method;
  j["seed"] = c.seed;
  j["train"] = c.train;
  j["pca"] = c.pca;
  j["synth"] = c.synth;
  j["bench"] = {{"bins", c.bench.bins},   {"storms", c.bench.storms}, {"reps", c.bench.reps},
                {"jobs", c.bench.jobs},   {"mask", c.bench.mask},     {"methods", c.bench.methods},
                {"method_train", c.bench.method_train}};
  j["mask"] = {{"mode", c.mask.mode},
               {"rate", c.mask.rate},
               {"delta", c.mask.delta ? nlohmann::json(*c.mask.delta) : nlohmann::json(nullptr)},
               {"tolerance", c.mask.tolerance}};
  j["structure"] = {{"t_min", c.structure.t_min},
                    {"s_min", c.structure.s_min},
                    {"area_cutoff", c.structure.area_cutoff}};
  j["paths"] = {{"input", c.paths.input},
                {"truth", c.paths.truth},
                {"imputed", c.paths.imputed},
                {"checkpoint", c.paths.checkpoint},
                {"output", c.paths.output}};
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    reject_unknown_keys(j, {"method", "seed", "train", "pca", "synth", "bench", "mask", "structure",
                            "paths"},
                        "config");
    read(j, "method", c.method);
    read(j, "seed", c.seed);
    read(j, "train", c.train);
    read(j, "pca", c.pca);
    read(j, "synth", c.synth);
    if (j.contains("bench")) {
      const auto& b = j.at("bench");
      reject_unknown_keys(b, {"bins", "storms", "reps", "jobs", "mask", "methods", "method_train"},
                          "bench");
      read(b, "bins", c.bench.bins);
      read(b, "storms", c.bench.storms);
      read(b, "reps", c.bench.reps);
      read(b, "jobs", c.bench.jobs);
      read(b, "mask", c.bench.mask);
      read(b, "methods", c.bench.methods);
      read(b, "method_train", c.bench.method_train);
      require(c.bench.method_train.is_object(), "bench.method_train must be an object");
    }
    if (j.contains("mask")) {
      const auto& m = j.at("mask");
      reject_unknown_keys(m, {"mode", "rate", "delta", "tolerance"}, "mask");
      read(m, "mode", c.mask.mode);
      read(m, "rate", c.mask.rate);
      if (m.contains("delta")) {
        if (m.at("delta").is_null()) {
          c.mask.delta.reset();
        } else {
          c.mask.delta = m.at("delta").get<double>();
        }
      }
      read(m, "tolerance", c.mask.tolerance);
    }
    if (j.contains("structure")) {
      const auto& s = j.at("structure");
      reject_unknown_keys(s, {"t_min", "s_min", "area_cutoff"}, "structure");
      read(s, "t_min", c.structure.t_min);
      read(s, "s_min", c.structure.s_min);
      read(s, "area_cutoff", c.structure.area_cutoff);
    }
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      reject_unknown_keys(p, {"input", "truth", "imputed", "checkpoint", "output"}, "paths");
      read(p, "input", c.paths.input);
      read(p, "truth", c.paths.truth);
      read(p, "imputed", c.paths.imputed);
      read(p, "checkpoint", c.paths.checkpoint);
      read(p, "output", c.paths.output);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.apply_master_seed();
  return c;
}

nlohmann::json load_config_json(const std::optional<std::filesystem::path>& path) {
  nlohmann::json j = to_json(RunConfig{});
  if (!path) return j;
  std::ifstream in(*path);
  if (!in) throw IoError("cannot open config file " + path->string());
  nlohmann::json file;
  try {
    file = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path->string() + ": " + e.what());
  }
  require(file.is_object(), "config file " + path->string() + " must hold a JSON object");
  j.merge_patch(file);
  return j;
}

}  // namespace convgain::cli
