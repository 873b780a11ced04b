// ctckit/model.h

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

#ifndef CTCKIT_MODEL_H_
#define CTCKIT_MODEL_H_

#include <optional>
#include <string>
#include <vector>

#include "ctckit/alphabet.h"
#include "ctckit/ctc.h"
#include "ctckit/features.h"
#include "ctckit/nn.h"

namespace ctckit {

enum class Topology { kSingleTask, kMultiTask };
enum class Task2Size { kLarge, kSmall };
enum class Task2Mode { kL1Only, kL1PlusL2 };

// Wiring of the two-task objective: Total = (1-lambda)*TC1 + lambda*TC2.
struct MtlConfig {
  double lambda = 0.3;
  Task2Size task2_size = Task2Size::kSmall;
  Task2Mode task2_mode = Task2Mode::kL1Only;
};

// Layer widths.  The full-scale recipe is 500-unit feedforward layers and
// 300 cells per direction; the defaults here are desk-scale and every test
// pins its own.
struct ModelDims {
  int ff_dim = 32;
  int lstm_cells = 16;
};

struct TaskBranch {
  std::string task;
  LayerStack layers;  // ends in a softmax-output layer sized |alphabet|
  Alphabet alphabet;
};

// A layered network: a (possibly empty) shared stack feeding one branch per
// task.  Single-task models are one branch with an empty shared stack.  The
// optional feature normalizer travels with the model so decoding applies
// the same statistics training saw.
struct ModelGraph {
  Topology topology = Topology::kSingleTask;
  int input_dim = 0;
  LayerStack shared;
  std::vector<TaskBranch> branches;
  FeatureNormalizer normalizer;

  TaskBranch& branch(const std::string& task);
  const TaskBranch& branch(const std::string& task) const;
  bool has_task(const std::string& task) const;

  // Layer specs along shared + branch, in forward order.
  std::vector<LayerSpec> task_layer_specs(const std::string& task) const;

  // Canonical flat parameter order: shared blocks, then each branch's
  // blocks in branch order.  AdamState and gradient vectors align to this.
  ParamSet params();
  std::size_t num_param_blocks() const;

  // Block index range [first, last) of the shared stack / one branch within
  // the canonical order.
  std::pair<std::size_t, std::size_t> shared_block_range() const;
  std::pair<std::size_t, std::size_t> branch_block_range(const std::string& task) const;

  ModelGraph clone() const;
};

inline const char* kTask1 = "task1";
inline const char* kTask2 = "task2";

// FF, FF, BiLSTM, BiLSTM, FF, FF(softmax |S|) over the input features, all
// parameters from Normal(0, init_std^2).  Layer seeds are derived from
// (seed, stable layer tag) so the same tags initialize identically across
// topologies.
ModelGraph build_single_task(const ModelDims& dims, const Alphabet& alphabet, int input_dim,
                             double init_std, std::uint64_t seed);

// Shared FF, FF, BiLSTM; task1 branch BiLSTM, FF, FF(softmax); task2 branch
// either BiLSTM, FF, FF(softmax) (large) or FF, FF(softmax) (small).
ModelGraph build_multitask(const ModelDims& dims, const Alphabet& task1_alphabet,
                           const Alphabet& task2_alphabet, const MtlConfig& config, int input_dim,
                           double init_std, std::uint64_t seed);

// Total_Cost = (1-lambda)*TC1 + lambda*TC2; lambda must lie in [0,1].
double combined_cost(double tc1, double tc2, double lambda);

// Forward activations recorded for one utterance and task.
struct ForwardTrace {
  std::string task;
  std::vector<LayerCache> shared_caches;
  std::vector<LayerCache> branch_caches;
  Matrix logits;
};

// Runs shared + branch on a T x input_dim feature sequence (the normalizer,
// if any, must already have been applied by the caller via model.normalizer).
Matrix task_logits(const ModelGraph& model, const std::string& task, const Matrix& features,
                   ForwardTrace* trace);

// Reverse sweep from d loss / d logits, scaled by `scale`, accumulating into
// the canonical gradient vector.
void backward_from_logits(const ModelGraph& model, const ForwardTrace& trace, const Matrix& dlogits,
                          double scale, std::vector<Matrix>* grads);

// One utterance as seen by the loss: features plus its label sequence.
struct Sample {
  const std::string* id;
  const Matrix* features;
  const LabelSequence* labels;
};

struct MtlBackwardResult {
  double tc1 = 0.0;  // mean CTC loss of the task1 batch
  double tc2 = 0.0;  // mean CTC loss of the task2 batch
  double total_cost = 0.0;
  std::vector<Matrix> grads;
};

struct TaskBackwardResult {
  double loss = 0.0;  // mean CTC loss over the batch
  std::vector<Matrix> grads;
};

// Plain single-task gradient (mean CTC loss over the batch, unit scale).
// Blocks not on the task's path are left zero.
TaskBackwardResult task_backward(ModelGraph& model, const std::string& task,
                                 const std::vector<Sample>& batch);

// Branch gradients scaled by (1-lambda) / lambda; the shared stack receives
// the sum of both scaled contributions.  Throws (naming the utterance) if a
// batch entry is CTC-infeasible.
MtlBackwardResult mtl_backward(ModelGraph& model, const std::vector<Sample>& task1_batch,
                               const std::vector<Sample>& task2_batch, double lambda);

// Pre-training surgery: clones the retained prefix (everything up to and
// including the first BiLSTM, matching the multitask shared split) from a
// single-task model.  The source model is not mutated.
LayerStack truncate_for_pretraining(const ModelGraph& single_task_model);

// Builds a single-task model whose leading layers are the given pre-trained
// stack (bit-identical copies) and whose new head (BiLSTM, FF, FF-softmax)
// is freshly initialized from the seed.
ModelGraph attach_new_head(const LayerStack& pretrained, const Alphabet& alphabet,
                           const ModelDims& dims, double init_std, std::uint64_t seed);

}  // namespace ctckit

#endif  // CTCKIT_MODEL_H_
