// ctckit/gradcheck.h

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

#ifndef CTCKIT_GRADCHECK_H_
#define CTCKIT_GRADCHECK_H_

#include <functional>

#include "ctckit/model.h"

namespace ctckit {

// Central-difference verification of reverse-mode gradients.  Perturbs each
// scalar parameter by +/- epsilon, recomputes the loss, and reports the
// worst relative disagreement with the analytic gradient.  Only intended
// for small models; refuses more than `parameter_budget` scalars.

// Generic form: loss_fn recomputes the scalar loss from the current
// parameter values; analytic is block-aligned with params.
double finite_difference_max_rel_error(const ParamSet& params,
                                       const std::function<double()>& loss_fn,
                                       const std::vector<Matrix>& analytic, double epsilon = 1e-5,
                                       std::size_t parameter_budget = 200);

// Squared-error head: loss = sum_t |logits_t - target_t|^2.
double finite_difference_check_squared_error(ModelGraph* model, const std::string& task,
                                             const Matrix& input, const Matrix& target,
                                             double epsilon = 1e-5,
                                             std::size_t parameter_budget = 200);

// Fused softmax + CTC head on the task logits.
double finite_difference_check_ctc(ModelGraph* model, const std::string& task, const Matrix& input,
                                   const LabelSequence& target, double epsilon = 1e-5,
                                   std::size_t parameter_budget = 200);

}  // namespace ctckit

#endif  // CTCKIT_GRADCHECK_H_
