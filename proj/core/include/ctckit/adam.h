// ctckit/adam.h

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

#ifndef CTCKIT_ADAM_H_
#define CTCKIT_ADAM_H_

#include "ctckit/nn.h"

namespace ctckit {

// Bias-corrected Adam.  Moment accumulators are aligned block-for-block
// with the ParamSet the state was created for.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step_count = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

AdamState make_adam_state(const ParamSet& params, double lr = 0.001);

// One update: m, v decay toward the gradient statistics, the step counter
// advances, and parameters move by lr * m_hat / (sqrt(v_hat) + epsilon).
// Throws (naming the parameter block) on any non-finite gradient; shapes
// must agree with the state.
void adam_step(const ParamSet& params, const std::vector<Matrix>& grads, AdamState* state);

}  // namespace ctckit

#endif  // CTCKIT_ADAM_H_
