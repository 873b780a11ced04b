// ctckit/train.cc

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

#include "ctckit/train.h"

#include <algorithm>
#include <iostream>
#include <limits>
#include <numeric>

#include "ctckit/decoder.h"
#include "ctckit/error.h"
#include "ctckit/rng.h"

namespace ctckit {

namespace {

void log_line(const TrainOptions& opts, const std::string& msg) {
  if (opts.log) {
    opts.log(msg);
  } else if (!opts.quiet) {
    std::cerr << msg << "\n";
  }
}

bool feasible(const Utterance& utt) {
  return utt.features.rows >= 1 && utt.features.rows >= min_alignment_frames(utt.labels);
}

void check_alphabet(const Utterance& utt, const Alphabet& alphabet, const std::string& task) {
  for (int label : utt.labels) {
    require(label > Alphabet::kBlank && label < alphabet.size(), "train: utterance '", utt.id,
            "' does not fit the ", task, " alphabet (label index ", label, ", alphabet size ",
            alphabet.size(), ")");
  }
}

// Indices of feasible utterances; warns per skipped utterance.
std::vector<int> feasible_indices(const Dataset& dataset, const Alphabet& alphabet,
                                  const std::string& task, const TrainOptions& opts,
                                  long long* skipped) {
  std::vector<int> indices;
  for (int i = 0; i < static_cast<int>(dataset.size()); ++i) {
    const Utterance& utt = dataset.utts[i];
    check_alphabet(utt, alphabet, task);
    if (feasible(utt)) {
      indices.push_back(i);
    } else {
      ++*skipped;
      log_line(opts, str_cat("train: skipping CTC-infeasible utterance '", utt.id, "' (", task,
                             "): T=", utt.features.rows, " < minimum ",
                             min_alignment_frames(utt.labels)));
    }
  }
  return indices;
}

Dataset normalized_copy(const Dataset& dataset, const FeatureNormalizer& norm) {
  Dataset copy = dataset;
  for (auto& utt : copy.utts) norm.apply(&utt.features);
  return copy;
}

std::vector<Sample> make_batch(const Dataset& dataset, const std::vector<int>& order,
                               std::size_t first, std::size_t last) {
  std::vector<Sample> batch;
  batch.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const Utterance& utt = dataset.utts[order[i]];
    batch.push_back({&utt.id, &utt.features, &utt.labels});
  }
  return batch;
}

// Cycles minibatches through a dataset, reshuffling each time it wraps.
class BatchCycle {
 public:
  BatchCycle(const Dataset& dataset, std::vector<int> indices, std::uint64_t seed,
             const std::string& tag)
      : dataset_(dataset), indices_(std::move(indices)), seed_(seed), tag_(tag) {
    reshuffle();
  }

  std::vector<Sample> next(std::size_t batch_size) {
    std::vector<Sample> batch;
    batch.reserve(batch_size);
    while (batch.size() < batch_size) {
      if (cursor_ == indices_.size()) reshuffle();
      const Utterance& utt = dataset_.utts[indices_[cursor_++]];
      batch.push_back({&utt.id, &utt.features, &utt.labels});
    }
    return batch;
  }

 private:
  void reshuffle() {
    auto rng = seeded_rng(seed_, str_cat("shuffle/", tag_, "/", rounds_++));
    std::shuffle(indices_.begin(), indices_.end(), rng);
    cursor_ = 0;
  }

  const Dataset& dataset_;
  std::vector<int> indices_;
  std::uint64_t seed_;
  std::string tag_;
  std::size_t cursor_ = 0;
  int rounds_ = 0;
};

double mean_loss_over(const ModelGraph& model, const std::string& task, const Dataset& dataset,
                      bool apply_normalizer, long long* infeasible) {
  double sum = 0.0;
  long long counted = 0;
  for (const auto& utt : dataset.utts) {
    if (!feasible(utt)) {
      if (infeasible) ++*infeasible;
      continue;
    }
    Matrix features = utt.features;
    if (apply_normalizer) model.normalizer.apply(&features);
    Matrix logits = task_logits(model, task, features, nullptr);
    sum += ctc_loss(log_softmax(logits), utt.labels).loss;
    ++counted;
  }
  require(counted > 0, "dataset_loss: no feasible utterance in the dataset");
  return sum / static_cast<double>(counted);
}

}  // namespace

double dataset_loss(const ModelGraph& model, const std::string& task, const Dataset& dataset,
                    long long* infeasible) {
  return mean_loss_over(model, task, dataset, true, infeasible);
}

TrainResult train(ModelGraph* model, const Dataset& train1, const Dataset& dev1,
                  const Dataset* train2, const TrainOptions& opts, AdamState* adam_out) {
  require(opts.batch_size >= 1, "train: batch_size must be >= 1");
  require(opts.max_epochs >= 0, "train: max_epochs must be >= 0");
  require(opts.patience >= 0, "train: patience must be >= 0");
  require(opts.lambda >= 0.0 && opts.lambda <= 1.0, "train: lambda must be in [0,1]");
  require(!train1.empty(), "train: empty task1 training set");
  require(!dev1.empty(), "train: empty task1 validation set");

  const bool use_mtl = model->topology == Topology::kMultiTask && opts.include_task2;
  if (use_mtl) require(train2 && !train2->empty(), "train: multitask training needs a task2 dataset");

  TrainResult result;

  if (opts.normalize_features) {
    std::vector<const Matrix*> feats;
    for (const auto& utt : train1.utts) feats.push_back(&utt.features);
    if (use_mtl)
      for (const auto& utt : train2->utts) feats.push_back(&utt.features);
    model->normalizer = estimate_normalizer(feats);
  }

  // Working copies with the normalizer baked in; the caller's datasets stay raw.
  Dataset tr1 = normalized_copy(train1, model->normalizer);
  Dataset tr2;
  if (use_mtl) tr2 = normalized_copy(*train2, model->normalizer);

  const Alphabet& alphabet1 = model->branch(kTask1).alphabet;
  std::vector<int> idx1 = feasible_indices(tr1, alphabet1, kTask1, opts, &result.infeasible_skipped);
  require(!idx1.empty(), "train: every task1 training utterance is CTC-infeasible");
  std::vector<int> idx2;
  if (use_mtl) {
    idx2 = feasible_indices(tr2, model->branch(kTask2).alphabet, kTask2, opts,
                            &result.infeasible_skipped);
    require(!idx2.empty(), "train: every task2 training utterance is CTC-infeasible");
  }
  for (const auto& utt : dev1.utts) check_alphabet(utt, alphabet1, kTask1);

  ParamSet params = model->params();
  AdamState adam = make_adam_state(params, opts.lr);

  auto snapshot = [&params]() {
    std::vector<Matrix> s;
    s.reserve(params.num_blocks());
    for (const auto& ref : params.refs()) s.push_back(*ref.mat);
    return s;
  };
  auto restore = [&params](const std::vector<Matrix>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) *params.refs()[i].mat = s[i];
  };

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Matrix> best_params;
  AdamState best_adam = adam;
  int bad_epochs = 0;

  std::unique_ptr<BatchCycle> task2_cycle;
  if (use_mtl) task2_cycle = std::make_unique<BatchCycle>(tr2, idx2, opts.seed, "task2");

  for (int epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    std::vector<int> order = idx1;
    auto rng = seeded_rng(opts.seed, str_cat("shuffle/task1/", epoch));
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t first = 0; first < order.size(); first += opts.batch_size) {
      const std::size_t last = std::min(order.size(), first + opts.batch_size);
      std::vector<Sample> batch1 = make_batch(tr1, order, first, last);
      std::vector<Matrix> grads;
      if (use_mtl) {
        std::vector<Sample> batch2 = task2_cycle->next(static_cast<std::size_t>(opts.batch_size));
        MtlBackwardResult step = mtl_backward(*model, batch1, batch2, opts.lambda);
        grads = std::move(step.grads);
      } else {
        TaskBackwardResult step = task_backward(*model, kTask1, batch1);
        grads = std::move(step.grads);
      }
      if (opts.grad_clip > 0.0) {
        const double norm = gradient_norm(grads);
        if (norm > opts.grad_clip) scale_gradients(&grads, opts.grad_clip / norm);
      }
      adam_step(params, grads, &adam);
    }

    const double val = dataset_loss(*model, kTask1, dev1, nullptr);
    result.epochs_run = epoch;
    if (val < best_val) {
      best_val = val;
      result.best_epoch = epoch;
      best_params = snapshot();
      best_adam = adam;
      bad_epochs = 0;
    } else {
      ++bad_epochs;
      if (bad_epochs > opts.patience) break;
    }
    log_line(opts, str_cat("train: epoch ", epoch, " val_loss ", val));
  }

  if (!best_params.empty()) restore(best_params);
  result.best_val_loss =
      std::isfinite(best_val) ? best_val : dataset_loss(*model, kTask1, dev1, nullptr);
  if (adam_out) *adam_out = best_adam;
  if (result.infeasible_skipped > 0) {
    log_line(opts, str_cat("train: skipped ", result.infeasible_skipped,
                           " CTC-infeasible utterances in total"));
  }
  return result;
}

TrainResult adapt(ModelGraph* model, const Dataset& adapt_train, const Dataset& adapt_dev,
                  const TrainOptions& opts) {
  require(!adapt_train.empty(), "adapt: empty adaptation set");
  TrainOptions adapted = opts;
  adapted.include_task2 = false;     // task2 branch is frozen during adaptation
  adapted.normalize_features = false;  // keep the statistics the model was trained with
  if (adapted.max_epochs == 0) {
    TrainResult result;
    result.best_val_loss = dataset_loss(*model, kTask1, adapt_dev, nullptr);
    return result;
  }
  return train(model, adapt_train, adapt_dev, nullptr, adapted);
}

long long edit_distance(const LabelSequence& ref, const LabelSequence& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<long long> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), 0ll);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<long long>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const long long sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double cer(const LabelSequence& reference, const LabelSequence& hypothesis) {
  require(!reference.empty(), "cer: empty reference");
  return static_cast<double>(edit_distance(reference, hypothesis)) /
         static_cast<double>(reference.size());
}

EvalReport evaluate_cer(const ModelGraph& model, const std::string& task, const Dataset& dataset,
                        int beam_width) {
  require(!dataset.empty(), "evaluate_cer: empty dataset");
  const Alphabet& alphabet = model.branch(task).alphabet;
  EvalReport report;
  for (const auto& utt : dataset.utts) {
    require(!utt.labels.empty(), "evaluate_cer: utterance '", utt.id, "' has an empty reference");
    Matrix features = utt.features;
    model.normalizer.apply(&features);
    Matrix logits = task_logits(model, task, features, nullptr);
    DecodeResult decoded = beam_search_decode(log_softmax(logits), beam_width);
    EvalRow row;
    row.id = utt.id;
    row.reference = utt.transcript;
    row.hypothesis = alphabet.render(decoded.labels);
    row.edits = edit_distance(utt.labels, decoded.labels);
    row.ref_len = static_cast<int>(utt.labels.size());
    report.total_edits += row.edits;
    report.total_ref_len += row.ref_len;
    report.rows.push_back(std::move(row));
  }
  report.cer = static_cast<double>(report.total_edits) / static_cast<double>(report.total_ref_len);
  return report;
}

}  // namespace ctckit
