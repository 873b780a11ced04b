// ctckit/train.h

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

#ifndef CTCKIT_TRAIN_H_
#define CTCKIT_TRAIN_H_

#include <functional>
#include <string>

#include "ctckit/adam.h"
#include "ctckit/dataset.h"
#include "ctckit/model.h"

namespace ctckit {

struct TrainOptions {
  double lr = 0.001;
  int batch_size = 30;
  int max_epochs = 200;
  int patience = 5;  // stop after this many consecutive non-improving validation rounds
  std::uint64_t seed = 1;
  double lambda = 0.3;         // multitask combination factor
  double grad_clip = 0.0;      // optional max-norm clip; 0 disables
  bool include_task2 = true;   // multitask models: draw and apply task2 batches
  bool normalize_features = true;
  bool quiet = true;
  std::function<void(const std::string&)> log;  // warnings (infeasible skips); default stderr
};

struct TrainResult {
  double best_val_loss = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
  long long infeasible_skipped = 0;
};

// Minibatch Adam over seeded shuffled epochs.  After each epoch the task1
// validation loss decides early stopping; the best parameters are restored
// into the model on return.  Multitask models draw one task2 batch per step
// and apply one combined update (mtl_backward).  CTC-infeasible utterances
// are skipped with a warning and counted; a dataset with no feasible
// utterance is a fatal error.  If opts.normalize_features is set, the
// normalizer is estimated on train1 (+train2) and stored in the model.
TrainResult train(ModelGraph* model, const Dataset& train1, const Dataset& dev1,
                  const Dataset* train2, const TrainOptions& opts, AdamState* adam_out = nullptr);

// Continues training every parameter of a single-task model, or the shared
// stack + task1 branch of a multitask model (the task2 branch is frozen),
// on in-domain data with a fresh optimizer state.  max_epochs = 0 leaves
// the model unchanged.
TrainResult adapt(ModelGraph* model, const Dataset& adapt_train, const Dataset& adapt_dev,
                  const TrainOptions& opts);

// Levenshtein distance with unit costs.
long long edit_distance(const LabelSequence& ref, const LabelSequence& hyp);

// Edit distance divided by reference length; the reference must be non-empty.
double cer(const LabelSequence& reference, const LabelSequence& hypothesis);

struct EvalRow {
  std::string id;
  std::string reference;
  std::string hypothesis;
  long long edits = 0;
  int ref_len = 0;
};

struct EvalReport {
  double cer = 0.0;  // pooled: total edits / total reference symbols
  long long total_edits = 0;
  long long total_ref_len = 0;
  std::vector<EvalRow> rows;
};

// Beam-search decodes every utterance and pools the edit counts over the
// whole set (pooled CER, not the mean of per-utterance CERs).
EvalReport evaluate_cer(const ModelGraph& model, const std::string& task, const Dataset& dataset,
                        int beam_width = 100);

// Mean per-utterance CTC loss of a dataset under the model (used for
// validation); infeasible utterances are skipped and counted.
double dataset_loss(const ModelGraph& model, const std::string& task, const Dataset& dataset,
                    long long* infeasible = nullptr);

}  // namespace ctckit

#endif  // CTCKIT_TRAIN_H_
