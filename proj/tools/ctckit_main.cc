// tools/ctckit_main.cc

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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ctckit/checkpoint.h"
#include "ctckit/config.h"
#include "ctckit/dataset.h"
#include "ctckit/decoder.h"
#include "ctckit/error.h"
#include "ctckit/feature_io.h"
#include "ctckit/grid.h"
#include "ctckit/synth.h"
#include "ctckit/train.h"
#include "ctckit/wav.h"

namespace fs = std::filesystem;
using namespace ctckit;

namespace {

struct ManifestLine {
  std::string id, path, transcript;
};

std::vector<ManifestLine> read_manifest_lines(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  require(bool(in), "cannot open manifest ", manifest_path);
  std::vector<ManifestLine> lines;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    require(tab1 != std::string::npos && tab2 != std::string::npos, manifest_path, " line ", line_no,
            ": expected 3 tab-separated fields");
    lines.push_back(
        {line.substr(0, tab1), line.substr(tab1 + 1, tab2 - tab1 - 1), line.substr(tab2 + 1)});
  }
  return lines;
}

int cmd_featurize(const std::string& manifest, const std::string& out_dir,
                  const std::string& config_path) {
  FeatureConfig features;
  if (!config_path.empty()) features = load_experiment_config(config_path).features;
  fs::create_directories(fs::path(out_dir) / "feats");
  const fs::path base = fs::path(manifest).parent_path();

  std::ofstream out_manifest(fs::path(out_dir) / "manifest.tsv");
  require(bool(out_manifest), "cannot write manifest under ", out_dir);
  int count = 0;
  for (const auto& entry : read_manifest_lines(manifest)) {
    fs::path wav = fs::path(entry.path).is_absolute() ? fs::path(entry.path) : base / entry.path;
    AudioBuffer audio = read_wav(wav.string());
    FrameMatrix feats = featurize(audio, features);
    const std::string feat_rel = "feats/" + entry.id + ".feat";
    write_feature_file(feats.frames, (fs::path(out_dir) / feat_rel).string());
    out_manifest << entry.id << '\t' << feat_rel << '\t' << entry.transcript << "\n";
    ++count;
  }
  std::cout << "featurized " << count << " utterances -> " << out_dir << "/manifest.tsv\n";
  return 0;
}

int cmd_synth_corpus(const std::string& out_dir, std::uint64_t seed,
                     const std::string& config_path, std::optional<double> overlap) {
  SynthSpec spec;
  if (!config_path.empty()) spec = load_grid_config(config_path).corpus;
  if (overlap) spec.overlap_fraction = *overlap;
  SynthCorpus corpus = generate_synthetic_corpus(spec, seed);
  fs::create_directories(out_dir);
  corpus.alphabet.to_file((fs::path(out_dir) / "alphabet.txt").string());
  const std::pair<const Dataset*, const char*> datasets[] = {
      {&corpus.lang_a_train, "lang-a-train"}, {&corpus.lang_a_dev, "lang-a-dev"},
      {&corpus.lang_a_test, "lang-a-test"},   {&corpus.lang_b_train, "lang-b-train"},
      {&corpus.lang_b_dev, "lang-b-dev"},     {&corpus.lang_b_test, "lang-b-test"},
      {&corpus.accented_train, "accented-a-train"}, {&corpus.accented_dev, "accented-a-dev"},
      {&corpus.accented_test, "accented-a-test"},
  };
  for (const auto& [dataset, name] : datasets) save_dataset(*dataset, out_dir, name);
  std::cout << "wrote synthetic corpus (seed " << seed << ", overlap " << spec.overlap_fraction
            << ") to " << out_dir << "\n";
  return 0;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& out_ckpt) {
  require(!cfg.alphabet_path.empty(), "config needs an 'alphabet' path");
  require(!cfg.train_manifest.empty() && !cfg.dev_manifest.empty(),
          "config needs 'train_manifest' and 'dev_manifest'");
  Alphabet alphabet = Alphabet::from_file(cfg.alphabet_path);
  Dataset train_set = load_dataset(cfg.train_manifest, alphabet, cfg.features, kTask1);
  Dataset dev_set = load_dataset(cfg.dev_manifest, alphabet, cfg.features, kTask1);
  require(!train_set.empty(), "training manifest ", cfg.train_manifest, " is empty");

  const int input_dim = train_set.utts.front().features.cols;
  ModelGraph model;
  Dataset task2_set;
  if (cfg.multitask) {
    require(!cfg.task2_train_manifest.empty(), "multitask config needs 'task2_train_manifest'");
    Alphabet task2_alphabet = Alphabet::from_file(cfg.task2_alphabet_path);
    task2_set = load_dataset(cfg.task2_train_manifest, task2_alphabet, cfg.features, kTask2);
    model = build_multitask(cfg.dims, alphabet, task2_alphabet, cfg.mtl, input_dim, cfg.init_std,
                            cfg.train.seed);
  } else {
    model = build_single_task(cfg.dims, alphabet, input_dim, cfg.init_std, cfg.train.seed);
  }

  TrainOptions opts = cfg.train;
  opts.quiet = false;
  AdamState adam;
  TrainResult result =
      train(&model, train_set, dev_set, cfg.multitask ? &task2_set : nullptr, opts, &adam);

  TrainingMeta meta;
  meta.epoch = result.best_epoch;
  meta.best_val_loss = result.best_val_loss;
  meta.seed = cfg.train.seed;
  meta.infeasible_skipped = result.infeasible_skipped;
  save_checkpoint(model, &adam, meta, out_ckpt);
  std::cout << "best validation loss " << result.best_val_loss << " at epoch " << result.best_epoch
            << " (" << result.epochs_run << " epochs run)\n"
            << "checkpoint written to " << out_ckpt << "\n";
  return 0;
}

int cmd_evaluate(const std::string& ckpt_path, const std::string& manifest, int beam_width,
                 const std::string& report_path, const std::string& task) {
  Checkpoint ckpt = load_checkpoint(ckpt_path);
  Dataset dataset = load_dataset(manifest, ckpt.model.branch(task).alphabet, {}, task);
  EvalReport report = evaluate_cer(ckpt.model, task, dataset, beam_width);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    require(bool(out), "cannot open ", report_path, " for writing");
    for (const auto& row : report.rows)
      out << row.id << '\t' << row.reference << '\t' << row.hypothesis << '\t' << row.edits << '\t'
          << row.ref_len << "\n";
  }
  char line[64];
  std::snprintf(line, sizeof(line), "CER %.6f", report.cer);
  std::cout << line << " (" << report.total_edits << " edits / " << report.total_ref_len
            << " reference symbols, " << report.rows.size() << " utterances)\n";
  return 0;
}

int cmd_decode(const std::string& ckpt_path, const std::string& manifest, const std::string& out,
               int beam_width, const std::string& task) {
  Checkpoint ckpt = load_checkpoint(ckpt_path);
  const Alphabet& alphabet = ckpt.model.branch(task).alphabet;
  Dataset dataset = load_dataset(manifest, alphabet, {}, task);
  std::ofstream out_file(out);
  require(bool(out_file), "cannot open ", out, " for writing");
  for (const auto& utt : dataset.utts) {
    Matrix features = utt.features;
    ckpt.model.normalizer.apply(&features);
    Matrix logits = task_logits(ckpt.model, task, features, nullptr);
    DecodeResult decoded = beam_search_decode(log_softmax(logits), beam_width);
    out_file << utt.id << '\t' << alphabet.render(decoded.labels) << "\n";
  }
  std::cout << "decoded " << dataset.size() << " utterances -> " << out << "\n";
  return 0;
}

int cmd_adapt(const std::string& ckpt_path, const std::string& manifest, const std::string& dev,
              const std::string& out_ckpt, const TrainOptions& opts) {
  Checkpoint ckpt = load_checkpoint(ckpt_path);
  const Alphabet& alphabet = ckpt.model.branch(kTask1).alphabet;
  Dataset train_set = load_dataset(manifest, alphabet, {}, kTask1);
  Dataset dev_set = load_dataset(dev, alphabet, {}, kTask1);
  TrainResult result = adapt(&ckpt.model, train_set, dev_set, opts);
  TrainingMeta meta = ckpt.meta;
  meta.epoch = result.best_epoch;
  meta.best_val_loss = result.best_val_loss;
  meta.seed = opts.seed;
  save_checkpoint(ckpt.model, ckpt.has_adam ? &ckpt.adam : nullptr, meta, out_ckpt);
  std::cout << "adapted for " << result.epochs_run << " epochs, best validation loss "
            << result.best_val_loss << "\nadapted checkpoint written to " << out_ckpt << "\n";
  return 0;
}

int cmd_grid(const std::string& config_path, const std::string& out_dir) {
  GridConfig cfg = load_grid_config(config_path);
  GridResult result = run_experiment_grid(cfg);
  fs::create_directories(out_dir);
  write_results_jsonl(result, (fs::path(out_dir) / "results.jsonl").string());
  std::ofstream table(fs::path(out_dir) / "table.txt", std::ios::binary);
  table << result.table;
  std::cout << result.table << "results written to " << out_dir << "/results.jsonl\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"end-to-end CTC acoustic modeling toolkit"};
  app.require_subcommand(1);

  // featurize
  auto* featurize_cmd = app.add_subcommand("featurize", "compute features for a wav manifest");
  std::string f_manifest, f_out, f_config;
  featurize_cmd->add_option("--manifest", f_manifest, "input manifest (id, wav path, transcript)")
      ->required();
  featurize_cmd->add_option("--out-dir", f_out, "output directory")->required();
  featurize_cmd->add_option("--config", f_config, "experiment config with a features section");

  // synth-corpus
  auto* synth_cmd = app.add_subcommand("synth-corpus", "generate the synthetic bilingual corpus");
  std::string s_out, s_config;
  std::uint64_t s_seed = 1;
  std::optional<double> s_overlap;
  synth_cmd->add_option("--out-dir", s_out, "output directory")->required();
  synth_cmd->add_option("--seed", s_seed, "corpus seed");
  synth_cmd->add_option("--config", s_config, "grid config with a corpus section");
  double s_overlap_value = 0.5;
  auto* overlap_opt = synth_cmd->add_option("--overlap", s_overlap_value,
                                            "fraction of the letter inventory that is accented");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model from an experiment config");
  std::string t_config, t_out = "model.ckpt";
  train_cmd->add_option("--config", t_config, "experiment config (JSON)")->required();
  train_cmd->add_option("--out", t_out, "output checkpoint path");
  std::optional<double> t_lambda, t_lr;
  std::optional<int> t_batch, t_epochs, t_patience, t_beam;
  std::optional<std::uint64_t> t_seed;
  std::optional<std::string> t_task2_size, t_task2_mode;
  std::optional<bool> t_multitask;
  train_cmd->add_option("--lambda", t_lambda, "multitask combination factor");
  train_cmd->add_option("--lr", t_lr, "Adam learning rate");
  train_cmd->add_option("--batch-size", t_batch, "minibatch size in utterances");
  train_cmd->add_option("--max-epochs", t_epochs, "epoch cap");
  train_cmd->add_option("--patience", t_patience, "early-stopping patience");
  train_cmd->add_option("--beam-width", t_beam, "decoder beam width");
  train_cmd->add_option("--seed", t_seed, "training seed");
  train_cmd->add_option("--task2-size", t_task2_size, "large|small");
  train_cmd->add_option("--task2-mode", t_task2_mode, "l1|l1l2");
  train_cmd->add_flag("--multitask,!--single-task", t_multitask, "override config topology");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "pooled CER of a checkpoint on a manifest");
  std::string e_ckpt, e_manifest, e_report, e_task = kTask1;
  int e_beam = 100;
  eval_cmd->add_option("--ckpt", e_ckpt, "checkpoint")->required();
  eval_cmd->add_option("--manifest", e_manifest, "evaluation manifest")->required();
  eval_cmd->add_option("--beam-width", e_beam, "beam width");
  eval_cmd->add_option("--report", e_report, "optional per-utterance TSV report");
  eval_cmd->add_option("--task", e_task, "branch to evaluate");

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "write transcripts for a manifest");
  std::string d_ckpt, d_manifest, d_out, d_task = kTask1;
  int d_beam = 100;
  decode_cmd->add_option("--ckpt", d_ckpt, "checkpoint")->required();
  decode_cmd->add_option("--manifest", d_manifest, "input manifest")->required();
  decode_cmd->add_option("--out", d_out, "output transcript file (id<TAB>text)")->required();
  decode_cmd->add_option("--beam-width", d_beam, "beam width");
  decode_cmd->add_option("--task", d_task, "branch to decode with");

  // adapt
  auto* adapt_cmd = app.add_subcommand("adapt", "continue training a checkpoint on new data");
  std::string a_ckpt, a_manifest, a_dev, a_out = "adapted.ckpt";
  TrainOptions a_opts;
  a_opts.max_epochs = 50;
  adapt_cmd->add_option("--ckpt", a_ckpt, "input checkpoint")->required();
  adapt_cmd->add_option("--manifest", a_manifest, "adaptation training manifest")->required();
  adapt_cmd->add_option("--dev", a_dev, "adaptation validation manifest")->required();
  adapt_cmd->add_option("--out", a_out, "output checkpoint path");
  adapt_cmd->add_option("--max-epochs", a_opts.max_epochs, "epoch cap");
  adapt_cmd->add_option("--patience", a_opts.patience, "early-stopping patience");
  adapt_cmd->add_option("--lr", a_opts.lr, "Adam learning rate");
  adapt_cmd->add_option("--batch-size", a_opts.batch_size, "minibatch size");
  adapt_cmd->add_option("--seed", a_opts.seed, "shuffle seed");

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "run the full experiment grid on synthetic corpora");
  std::string g_config, g_out = "results";
  grid_cmd->add_option("--config", g_config, "grid config (JSON)")->required();
  grid_cmd->add_option("--out-dir", g_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*featurize_cmd) return cmd_featurize(f_manifest, f_out, f_config);
    if (*synth_cmd) {
      if (*overlap_opt) s_overlap = s_overlap_value;
      return cmd_synth_corpus(s_out, s_seed, s_config, s_overlap);
    }
    if (*train_cmd) {
      ExperimentConfig cfg = load_experiment_config(t_config);
      if (t_lambda) cfg.mtl.lambda = *t_lambda;
      if (t_lr) cfg.train.lr = *t_lr;
      if (t_batch) cfg.train.batch_size = *t_batch;
      if (t_epochs) cfg.train.max_epochs = *t_epochs;
      if (t_patience) cfg.train.patience = *t_patience;
      if (t_beam) cfg.beam_width = *t_beam;
      if (t_seed) cfg.train.seed = *t_seed;
      if (t_task2_size) cfg.mtl.task2_size = parse_task2_size(*t_task2_size);
      if (t_task2_mode) cfg.mtl.task2_mode = parse_task2_mode(*t_task2_mode);
      if (t_multitask) cfg.multitask = *t_multitask;
      cfg.train.lambda = cfg.mtl.lambda;
      return cmd_train(cfg, t_out);
    }
    if (*eval_cmd) return cmd_evaluate(e_ckpt, e_manifest, e_beam, e_report, e_task);
    if (*decode_cmd) return cmd_decode(d_ckpt, d_manifest, d_out, d_beam, d_task);
    if (*adapt_cmd) return cmd_adapt(a_ckpt, a_manifest, a_dev, a_out, a_opts);
    if (*grid_cmd) return cmd_grid(g_config, g_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
