// tests/test_util.h

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

#ifndef CTCKIT_TESTS_TEST_UTIL_H_
#define CTCKIT_TESTS_TEST_UTIL_H_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ctckit/ctc.h"
#include "ctckit/matrix.h"
#include "ctckit/rng.h"

namespace ctckit::testing {

// Random normalized OutputMatrix with strictly positive probabilities.
inline OutputMatrix random_outputs(int t_len, int n_symbols, std::mt19937_64* rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  OutputMatrix out;
  out.logp = Matrix(t_len, n_symbols);
  for (int t = 0; t < t_len; ++t) {
    double sum = 0.0;
    std::vector<double> p(n_symbols);
    for (int k = 0; k < n_symbols; ++k) {
      p[k] = unif(*rng);
      sum += p[k];
    }
    for (int k = 0; k < n_symbols; ++k) out.logp(t, k) = std::log(p[k] / sum);
  }
  return out;
}

// Probabilities -> log matrix, one row per frame.
inline OutputMatrix outputs_from_probs(const std::vector<std::vector<double>>& probs) {
  OutputMatrix out;
  out.logp = Matrix(static_cast<int>(probs.size()), static_cast<int>(probs[0].size()));
  for (int t = 0; t < out.logp.rows; ++t)
    for (int k = 0; k < out.logp.cols; ++k) out.logp(t, k) = std::log(probs[t][k]);
  return out;
}

// Random CTC-feasible target of length <= max_len over symbols 1..n_symbols-1.
inline LabelSequence random_feasible_target(int t_len, int n_symbols, int max_len,
                                            std::mt19937_64* rng) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> sym_dist(1, n_symbols - 1);
  for (;;) {
    LabelSequence target;
    const int len = len_dist(*rng);
    for (int i = 0; i < len; ++i) target.push_back(sym_dist(*rng));
    if (min_alignment_frames(target) <= t_len) return target;
  }
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64* rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (double& v : m.data) v = dist(*rng);
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

}  // namespace ctckit::testing

#endif  // CTCKIT_TESTS_TEST_UTIL_H_
