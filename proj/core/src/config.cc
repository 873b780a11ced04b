// ctckit/config.cc

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ctckit/config.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctckit/error.h"

namespace ctckit {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), what, ": invalid JSON");
  require(j.is_object(), what, ": top level must be an object");
  return j;
}

// Pulls known keys out of `obj`, erroring on leftovers so typos surface.
class Section {
 public:
  Section(json obj, std::string name) : obj_(std::move(obj)), name_(std::move(name)) {
    require(obj_.is_object(), name_, " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T* out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      *out = it->get<T>();
    } catch (const json::exception&) {
      raise(name_, ".", key, " has the wrong type");
    }
    obj_.erase(it);
  }

  json take(const char* key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return json();
    json value = *it;
    obj_.erase(it);
    return value;
  }

  void finish() {
    require(obj_.empty(), name_, " has unknown key '", obj_.begin().key(), "'");
  }

 private:
  json obj_;
  std::string name_;
};

void parse_dims(const json& j, ModelDims* dims) {
  if (j.is_null()) return;
  Section s(j, "model");
  s.get("ff_dim", &dims->ff_dim);
  s.get("lstm_cells", &dims->lstm_cells);
  s.finish();
}

void parse_train(const json& j, TrainOptions* opts) {
  if (j.is_null()) return;
  Section s(j, "train");
  s.get("lr", &opts->lr);
  s.get("batch_size", &opts->batch_size);
  s.get("max_epochs", &opts->max_epochs);
  s.get("patience", &opts->patience);
  s.get("seed", &opts->seed);
  s.get("grad_clip", &opts->grad_clip);
  s.get("normalize_features", &opts->normalize_features);
  s.finish();
}

void parse_features(const json& j, FeatureConfig* cfg) {
  if (j.is_null()) return;
  Section s(j, "features");
  s.get("n_filters", &cfg->n_filters);
  s.get("window_s", &cfg->window_s);
  s.get("hop_s", &cfg->hop_s);
  s.get("fft_size", &cfg->fft_size);
  s.get("context", &cfg->context);
  s.get("decimation", &cfg->decimation);
  s.finish();
}

void parse_corpus(const json& j, SynthSpec* spec) {
  if (j.is_null()) return;
  Section s(j, "corpus");
  s.get("n_letters", &spec->n_letters);
  s.get("feature_dim", &spec->feature_dim);
  s.get("frames_per_char_min", &spec->frames_per_char_min);
  s.get("frames_per_char_max", &spec->frames_per_char_max);
  s.get("proto_stddev", &spec->proto_stddev);
  s.get("proto_correlation", &spec->proto_correlation);
  s.get("noise_stddev", &spec->noise_stddev);
  s.get("overlap_fraction", &spec->overlap_fraction);
  s.get("min_chars", &spec->min_chars);
  s.get("max_chars", &spec->max_chars);
  s.get("train_utts", &spec->train_utts);
  s.get("dev_utts", &spec->dev_utts);
  s.get("test_utts", &spec->test_utts);
  s.get("accented_train_utts", &spec->accented_train_utts);
  s.get("accented_dev_utts", &spec->accented_dev_utts);
  s.get("accented_test_utts", &spec->accented_test_utts);
  s.finish();
}

void parse_mtl(const json& j, MtlConfig* mtl) {
  if (j.is_null()) return;
  Section s(j, "mtl");
  s.get("lambda", &mtl->lambda);
  std::string size, mode;
  s.get("task2_size", &size);
  s.get("task2_mode", &mode);
  if (!size.empty()) mtl->task2_size = parse_task2_size(size);
  if (!mode.empty()) mtl->task2_mode = parse_task2_mode(mode);
  s.finish();
}

std::string slurp(const std::string& path, const char* what) {
  std::ifstream in(path);
  require(bool(in), what, ": cannot open ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Task2Size parse_task2_size(const std::string& value) {
  if (value == "large") return Task2Size::kLarge;
  if (value == "small") return Task2Size::kSmall;
  raise("task2_size must be 'large' or 'small', got '", value, "'");
}

Task2Mode parse_task2_mode(const std::string& value) {
  if (value == "l1") return Task2Mode::kL1Only;
  if (value == "l1l2") return Task2Mode::kL1PlusL2;
  raise("task2_mode must be 'l1' or 'l1l2', got '", value, "'");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  ExperimentConfig cfg;
  Section root(parse_json(json_text, "experiment config"), "config");
  parse_dims(root.take("model"), &cfg.dims);
  parse_train(root.take("train"), &cfg.train);
  parse_features(root.take("features"), &cfg.features);
  parse_mtl(root.take("mtl"), &cfg.mtl);
  root.get("init_std", &cfg.init_std);
  root.get("multitask", &cfg.multitask);
  root.get("beam_width", &cfg.beam_width);
  root.get("alphabet", &cfg.alphabet_path);
  root.get("train_manifest", &cfg.train_manifest);
  root.get("dev_manifest", &cfg.dev_manifest);
  root.get("task2_train_manifest", &cfg.task2_train_manifest);
  root.get("task2_alphabet", &cfg.task2_alphabet_path);
  root.finish();
  cfg.train.lambda = cfg.mtl.lambda;
  if (cfg.task2_alphabet_path.empty()) cfg.task2_alphabet_path = cfg.alphabet_path;
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(slurp(path, "load_experiment_config"));
}

GridConfig parse_grid_config(const std::string& json_text) {
  GridConfig cfg;
  // Grid defaults favor short runs; the seeded experiments pin their own.
  cfg.train.max_epochs = 60;
  cfg.adapt_opts.max_epochs = 30;
  Section root(parse_json(json_text, "grid config"), "config");
  parse_corpus(root.take("corpus"), &cfg.corpus);
  parse_dims(root.take("model"), &cfg.dims);
  parse_train(root.take("train"), &cfg.train);
  parse_train(root.take("adapt"), &cfg.adapt_opts);
  MtlConfig mtl;
  parse_mtl(root.take("mtl"), &mtl);
  cfg.lambda = mtl.lambda;
  root.get("init_std", &cfg.init_std);
  root.get("beam_width", &cfg.beam_width);
  root.get("seeds", &cfg.seeds);
  root.finish();
  cfg.train.lambda = cfg.lambda;
  return cfg;
}

GridConfig load_grid_config(const std::string& path) {
  return parse_grid_config(slurp(path, "load_grid_config"));
}

}  // namespace ctckit
