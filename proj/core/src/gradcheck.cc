// ctckit/gradcheck.cc

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

#include "ctckit/gradcheck.h"

#include <cmath>

#include "ctckit/error.h"

namespace ctckit {

double finite_difference_max_rel_error(const ParamSet& params,
                                       const std::function<double()>& loss_fn,
                                       const std::vector<Matrix>& analytic, double epsilon,
                                       std::size_t parameter_budget) {
  require(epsilon > 0.0, "finite_difference_max_rel_error: epsilon must be > 0");
  require(params.total_scalars() <= parameter_budget, "finite_difference_max_rel_error: model has ",
          params.total_scalars(), " parameters, budget is ", parameter_budget);
  require(analytic.size() == params.num_blocks(),
          "finite_difference_max_rel_error: analytic gradient does not match the parameter set");

  // Flatten the analytic blocks in the same order as ParamSet flat indexing.
  std::vector<double> flat_analytic;
  flat_analytic.reserve(params.total_scalars());
  for (const auto& block : analytic)
    flat_analytic.insert(flat_analytic.end(), block.data.begin(), block.data.end());

  ParamSet& mutable_params = const_cast<ParamSet&>(params);
  double max_rel = 0.0;
  for (std::size_t i = 0; i < params.total_scalars(); ++i) {
    const double original = params.get_flat(i);
    mutable_params.set_flat(i, original + epsilon);
    const double loss_plus = loss_fn();
    mutable_params.set_flat(i, original - epsilon);
    const double loss_minus = loss_fn();
    mutable_params.set_flat(i, original);
    const double fd = (loss_plus - loss_minus) / (2.0 * epsilon);
    const double an = flat_analytic[i];
    // Floor the denominator so near-zero gradients are judged on absolute
    // error at the scale of the finite-difference noise.
    const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-4});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

double finite_difference_check_squared_error(ModelGraph* model, const std::string& task,
                                             const Matrix& input, const Matrix& target,
                                             double epsilon, std::size_t parameter_budget) {
  ParamSet params = model->params();
  auto loss_fn = [&]() {
    Matrix logits = task_logits(*model, task, input, nullptr);
    require(logits.same_shape(target), "finite_difference_check: target shape mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < logits.data.size(); ++i) {
      const double d = logits.data[i] - target.data[i];
      loss += d * d;
    }
    return loss;
  };

  ForwardTrace trace;
  Matrix logits = task_logits(*model, task, input, &trace);
  require(logits.same_shape(target), "finite_difference_check: target shape mismatch");
  Matrix dlogits(logits.rows, logits.cols);
  for (std::size_t i = 0; i < logits.data.size(); ++i)
    dlogits.data[i] = 2.0 * (logits.data[i] - target.data[i]);
  std::vector<Matrix> analytic = zeros_like(params);
  backward_from_logits(*model, trace, dlogits, 1.0, &analytic);

  return finite_difference_max_rel_error(params, loss_fn, analytic, epsilon, parameter_budget);
}

double finite_difference_check_ctc(ModelGraph* model, const std::string& task, const Matrix& input,
                                   const LabelSequence& target, double epsilon,
                                   std::size_t parameter_budget) {
  ParamSet params = model->params();
  auto loss_fn = [&]() {
    Matrix logits = task_logits(*model, task, input, nullptr);
    return ctc_loss(log_softmax(logits), target).loss;
  };

  ForwardTrace trace;
  Matrix logits = task_logits(*model, task, input, &trace);
  CtcResult ctc = ctc_loss(log_softmax(logits), target);
  std::vector<Matrix> analytic = zeros_like(params);
  backward_from_logits(*model, trace, ctc.logit_grad, 1.0, &analytic);

  return finite_difference_max_rel_error(params, loss_fn, analytic, epsilon, parameter_budget);
}

}  // namespace ctckit
