// ctckit/model.cc

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

#include "ctckit/model.h"

#include <algorithm>

#include "ctckit/error.h"
#include "ctckit/rng.h"

namespace ctckit {

namespace {

// Stable per-layer tags: the same tag initializes identically for the same
// seed, which is what makes a lambda=0 multitask run reproduce the baseline
// bit-for-bit and keeps attach_new_head independent of surrounding layers.
void init_stack(LayerStack* stack, const std::string& role, double init_std, std::uint64_t seed,
                int first_index = 0) {
  for (std::size_t i = 0; i < stack->size(); ++i) {
    auto rng = seeded_rng(seed, str_cat("init/", role, "/", first_index + static_cast<int>(i)));
    (*stack)[i]->init_normal(init_std, &rng);
  }
}

LayerStack build_from_specs(const std::vector<LayerSpec>& specs) {
  LayerStack stack;
  stack.reserve(specs.size());
  for (const auto& spec : specs) stack.push_back(make_layer(spec));
  return stack;
}

}  // namespace

TaskBranch& ModelGraph::branch(const std::string& task) {
  for (auto& b : branches)
    if (b.task == task) return b;
  raise("ModelGraph: no branch for task '", task, "'");
}

const TaskBranch& ModelGraph::branch(const std::string& task) const {
  for (const auto& b : branches)
    if (b.task == task) return b;
  raise("ModelGraph: no branch for task '", task, "'");
}

bool ModelGraph::has_task(const std::string& task) const {
  return std::any_of(branches.begin(), branches.end(),
                     [&](const TaskBranch& b) { return b.task == task; });
}

std::vector<LayerSpec> ModelGraph::task_layer_specs(const std::string& task) const {
  std::vector<LayerSpec> specs;
  for (const auto& layer : shared) specs.push_back(layer->spec());
  for (const auto& layer : branch(task).layers) specs.push_back(layer->spec());
  return specs;
}

ParamSet ModelGraph::params() {
  std::vector<ParamRef> refs;
  for (std::size_t i = 0; i < shared.size(); ++i)
    shared[i]->append_param_refs(str_cat("shared/", i), &refs);
  for (auto& b : branches) {
    for (std::size_t i = 0; i < b.layers.size(); ++i)
      b.layers[i]->append_param_refs(str_cat(b.task, "/", i), &refs);
  }
  return ParamSet(std::move(refs));
}

std::size_t ModelGraph::num_param_blocks() const {
  std::size_t n = stack_num_param_blocks(shared);
  for (const auto& b : branches) n += stack_num_param_blocks(b.layers);
  return n;
}

std::pair<std::size_t, std::size_t> ModelGraph::shared_block_range() const {
  return {0, static_cast<std::size_t>(stack_num_param_blocks(shared))};
}

std::pair<std::size_t, std::size_t> ModelGraph::branch_block_range(const std::string& task) const {
  std::size_t cursor = stack_num_param_blocks(shared);
  for (const auto& b : branches) {
    const std::size_t blocks = stack_num_param_blocks(b.layers);
    if (b.task == task) return {cursor, cursor + blocks};
    cursor += blocks;
  }
  raise("ModelGraph: no branch for task '", task, "'");
}

ModelGraph ModelGraph::clone() const {
  ModelGraph copy;
  copy.topology = topology;
  copy.input_dim = input_dim;
  copy.shared = clone_stack(shared);
  for (const auto& b : branches) copy.branches.push_back({b.task, clone_stack(b.layers), b.alphabet});
  copy.normalizer = normalizer;
  return copy;
}

ModelGraph build_single_task(const ModelDims& dims, const Alphabet& alphabet, int input_dim,
                             double init_std, std::uint64_t seed) {
  require(input_dim > 0, "build_single_task: input_dim must be positive");
  std::vector<LayerSpec> specs = {
      feedforward_spec(input_dim, dims.ff_dim),
      feedforward_spec(dims.ff_dim, dims.ff_dim),
      bilstm_spec(dims.ff_dim, dims.lstm_cells),
      bilstm_spec(2 * dims.lstm_cells, dims.lstm_cells),
      feedforward_spec(2 * dims.lstm_cells, dims.ff_dim),
      softmax_output_spec(dims.ff_dim, alphabet.size()),
  };
  ModelGraph model;
  model.topology = Topology::kSingleTask;
  model.input_dim = input_dim;
  model.branches.push_back({kTask1, build_from_specs(specs), alphabet});
  // The first three layers carry "shared" tags, the head carries task1
  // tags, mirroring the multitask split of the same stack.
  LayerStack& layers = model.branches[0].layers;
  for (int i = 0; i < 3; ++i) {
    auto rng = seeded_rng(seed, str_cat("init/shared/", i));
    layers[i]->init_normal(init_std, &rng);
  }
  for (int i = 3; i < 6; ++i) {
    auto rng = seeded_rng(seed, str_cat("init/task1/", i - 3));
    layers[i]->init_normal(init_std, &rng);
  }
  return model;
}

ModelGraph build_multitask(const ModelDims& dims, const Alphabet& task1_alphabet,
                           const Alphabet& task2_alphabet, const MtlConfig& config, int input_dim,
                           double init_std, std::uint64_t seed) {
  require(input_dim > 0, "build_multitask: input_dim must be positive");
  require(config.lambda >= 0.0 && config.lambda <= 1.0, "build_multitask: lambda must be in [0,1]");

  ModelGraph model;
  model.topology = Topology::kMultiTask;
  model.input_dim = input_dim;
  model.shared = build_from_specs({
      feedforward_spec(input_dim, dims.ff_dim),
      feedforward_spec(dims.ff_dim, dims.ff_dim),
      bilstm_spec(dims.ff_dim, dims.lstm_cells),
  });
  std::vector<LayerSpec> task1_specs = {
      bilstm_spec(2 * dims.lstm_cells, dims.lstm_cells),
      feedforward_spec(2 * dims.lstm_cells, dims.ff_dim),
      softmax_output_spec(dims.ff_dim, task1_alphabet.size()),
  };
  std::vector<LayerSpec> task2_specs;
  if (config.task2_size == Task2Size::kLarge) {
    task2_specs = {
        bilstm_spec(2 * dims.lstm_cells, dims.lstm_cells),
        feedforward_spec(2 * dims.lstm_cells, dims.ff_dim),
        softmax_output_spec(dims.ff_dim, task2_alphabet.size()),
    };
  } else {
    task2_specs = {
        feedforward_spec(2 * dims.lstm_cells, dims.ff_dim),
        softmax_output_spec(dims.ff_dim, task2_alphabet.size()),
    };
  }
  model.branches.push_back({kTask1, build_from_specs(task1_specs), task1_alphabet});
  model.branches.push_back({kTask2, build_from_specs(task2_specs), task2_alphabet});

  init_stack(&model.shared, "shared", init_std, seed);
  init_stack(&model.branches[0].layers, kTask1, init_std, seed);
  init_stack(&model.branches[1].layers, kTask2, init_std, seed);
  return model;
}

double combined_cost(double tc1, double tc2, double lambda) {
  require(lambda >= 0.0 && lambda <= 1.0, "combined_cost: lambda must be in [0,1], got ", lambda);
  require(std::isfinite(tc1) && std::isfinite(tc2), "combined_cost: losses must be finite");
  return (1.0 - lambda) * tc1 + lambda * tc2;
}

Matrix task_logits(const ModelGraph& model, const std::string& task, const Matrix& features,
                   ForwardTrace* trace) {
  require(features.cols == model.input_dim, "task_logits: feature dim ", features.cols,
          " != model input dim ", model.input_dim);
  const TaskBranch& b = model.branch(task);
  if (trace) trace->task = task;
  Matrix hidden = stack_forward(model.shared, features, trace ? &trace->shared_caches : nullptr);
  Matrix logits = stack_forward(b.layers, hidden, trace ? &trace->branch_caches : nullptr);
  if (trace) trace->logits = logits;
  return logits;
}

void backward_from_logits(const ModelGraph& model, const ForwardTrace& trace, const Matrix& dlogits,
                          double scale, std::vector<Matrix>* grads) {
  require(grads->size() == model.num_param_blocks(),
          "backward_from_logits: gradient vector does not match the model");
  require(trace.logits.rows == dlogits.rows && trace.logits.cols == dlogits.cols,
          "backward_from_logits: upstream gradient shape does not match the recorded forward pass");
  const TaskBranch& b = model.branch(trace.task);

  Matrix upstream = dlogits;
  if (scale != 1.0) {
    for (double& v : upstream.data) v *= scale;
  }
  const auto [branch_first, branch_last] = model.branch_block_range(trace.task);
  (void)branch_last;
  Matrix grad_hidden = stack_backward(b.layers, trace.branch_caches, upstream, grads, branch_first);
  if (!model.shared.empty()) {
    stack_backward(model.shared, trace.shared_caches, grad_hidden, grads, 0);
  }
}

namespace {

// Mean CTC loss over a batch; accumulates scaled gradients for one task.
double batch_backward(ModelGraph& model, const std::string& task, const std::vector<Sample>& batch,
                      double scale, std::vector<Matrix>* grads) {
  require(!batch.empty(), "backward: empty batch for ", task);
  const double per_utt = scale / static_cast<double>(batch.size());
  double loss_sum = 0.0;
  for (const Sample& sample : batch) {
    ForwardTrace trace;
    Matrix logits = task_logits(model, task, *sample.features, &trace);
    OutputMatrix outputs = log_softmax(logits);
    CtcResult ctc;
    try {
      ctc = ctc_loss(outputs, *sample.labels);
    } catch (const Error& e) {
      raise("backward: utterance '", sample.id ? *sample.id : std::string("<unnamed>"), "' (", task,
            "): ", e.what());
    }
    loss_sum += ctc.loss;
    if (per_utt != 0.0) backward_from_logits(model, trace, ctc.logit_grad, per_utt, grads);
  }
  return loss_sum / static_cast<double>(batch.size());
}

}  // namespace

TaskBackwardResult task_backward(ModelGraph& model, const std::string& task,
                                 const std::vector<Sample>& batch) {
  TaskBackwardResult result;
  {
    ParamSet params = model.params();
    result.grads = zeros_like(params);
  }
  result.loss = batch_backward(model, task, batch, 1.0, &result.grads);
  return result;
}

MtlBackwardResult mtl_backward(ModelGraph& model, const std::vector<Sample>& task1_batch,
                               const std::vector<Sample>& task2_batch, double lambda) {
  require(lambda >= 0.0 && lambda <= 1.0, "mtl_backward: lambda must be in [0,1], got ", lambda);
  MtlBackwardResult result;
  result.grads.clear();
  {
    ParamSet params = model.params();
    result.grads = zeros_like(params);
  }
  result.tc1 = batch_backward(model, kTask1, task1_batch, 1.0 - lambda, &result.grads);
  result.tc2 = batch_backward(model, kTask2, task2_batch, lambda, &result.grads);
  result.total_cost = combined_cost(result.tc1, result.tc2, lambda);
  return result;
}

LayerStack truncate_for_pretraining(const ModelGraph& single_task_model) {
  require(single_task_model.topology == Topology::kSingleTask,
          "truncate_for_pretraining: expected a single-task model");
  const LayerStack& layers = single_task_model.branch(kTask1).layers;
  LayerStack retained;
  for (const auto& layer : layers) {
    retained.push_back(layer->clone());
    if (layer->spec().kind == LayerKind::kBiLstm) break;  // keep through the first BiLSTM
  }
  require(!retained.empty() && retained.back()->spec().kind == LayerKind::kBiLstm,
          "truncate_for_pretraining: model has no BiLSTM layer to retain");
  return retained;
}

ModelGraph attach_new_head(const LayerStack& pretrained, const Alphabet& alphabet,
                           const ModelDims& dims, double init_std, std::uint64_t seed) {
  require(!pretrained.empty(), "attach_new_head: empty pre-trained stack");
  const int hidden_dim = pretrained.back()->spec().actual_output_dim();
  require(hidden_dim == 2 * dims.lstm_cells, "attach_new_head: pre-trained stack emits ", hidden_dim,
          " dims but the head expects ", 2 * dims.lstm_cells);

  ModelGraph model;
  model.topology = Topology::kSingleTask;
  model.input_dim = pretrained.front()->spec().input_dim;
  LayerStack layers = clone_stack(pretrained);
  LayerStack head = build_from_specs({
      bilstm_spec(2 * dims.lstm_cells, dims.lstm_cells),
      feedforward_spec(2 * dims.lstm_cells, dims.ff_dim),
      softmax_output_spec(dims.ff_dim, alphabet.size()),
  });
  init_stack(&head, kTask1, init_std, seed);
  for (auto& layer : head) layers.push_back(std::move(layer));
  model.branches.push_back({kTask1, std::move(layers), alphabet});
  return model;
}

}  // namespace ctckit
