// ctckit/adam.cc

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

#include "ctckit/adam.h"

#include <cmath>

#include "ctckit/error.h"

namespace ctckit {

AdamState make_adam_state(const ParamSet& params, double lr) {
  AdamState state;
  state.lr = lr;
  state.m = zeros_like(params);
  state.v = zeros_like(params);
  return state;
}

void adam_step(const ParamSet& params, const std::vector<Matrix>& grads, AdamState* state) {
  require(grads.size() == params.num_blocks(), "adam_step: got ", grads.size(),
          " gradient blocks for ", params.num_blocks(), " parameter blocks");
  require(state->m.size() == params.num_blocks() && state->v.size() == params.num_blocks(),
          "adam_step: optimizer state does not match the parameter set");

  for (std::size_t b = 0; b < grads.size(); ++b) {
    require(grads[b].same_shape(*params.refs()[b].mat), "adam_step: gradient shape mismatch in block ",
            params.block_name(b));
    require(grads[b].all_finite(), "adam_step: non-finite gradient in block ", params.block_name(b));
  }

  state->step_count += 1;
  const double bias1 = 1.0 - std::pow(state->beta1, static_cast<double>(state->step_count));
  const double bias2 = 1.0 - std::pow(state->beta2, static_cast<double>(state->step_count));
  for (std::size_t b = 0; b < grads.size(); ++b) {
    Matrix& param = *params.refs()[b].mat;
    Matrix& m = state->m[b];
    Matrix& v = state->v[b];
    const Matrix& g = grads[b];
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      m.data[i] = state->beta1 * m.data[i] + (1.0 - state->beta1) * g.data[i];
      v.data[i] = state->beta2 * v.data[i] + (1.0 - state->beta2) * g.data[i] * g.data[i];
      const double m_hat = m.data[i] / bias1;
      const double v_hat = v.data[i] / bias2;
      param.data[i] -= state->lr * m_hat / (std::sqrt(v_hat) + state->epsilon);
    }
  }
}

}  // namespace ctckit
