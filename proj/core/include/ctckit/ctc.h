// ctckit/ctc.h

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

#ifndef CTCKIT_CTC_H_
#define CTCKIT_CTC_H_

#include <cmath>
#include <limits>

#include "ctckit/alphabet.h"
#include "ctckit/matrix.h"

namespace ctckit {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

// Per-frame distributions over the output symbols, stored as log
// probabilities: logp.rows = T frames, logp.cols = |S| symbols.  Each row
// must be a normalized distribution.
struct OutputMatrix {
  Matrix logp;

  int num_frames() const { return logp.rows; }
  int num_symbols() const { return logp.cols; }
};

// exp-normalization with max subtraction; sums to 1 within 1e-12.
Vector softmax_frame(const Vector& logits);

// Row-wise log-softmax over a T x |S| logit matrix.
OutputMatrix log_softmax(const Matrix& logits);

// Throws unless every row of outputs.logp is a normalized log distribution
// (probabilities sum to 1 within tolerance, no entry above 0).
void validate_output_matrix(const OutputMatrix& outputs, double tolerance = 1e-9);

// Interleaves blanks around the target: "ab" -> (-, a, -, b, -).
std::vector<int> expand_with_blanks(const LabelSequence& target, int blank = Alphabet::kBlank);

// Shortest alignment length that can produce the target: L plus one frame
// for each adjacent repeated label.
int min_alignment_frames(const LabelSequence& target);

struct CtcResult {
  double loss = 0.0;    // -log P(target | outputs)
  Matrix logit_grad;    // d loss / d logits, T x |S| (through the softmax)
};

// Forward-backward evaluation of the CTC objective over the blank-expanded
// target, entirely in log space.  The gradient is taken with respect to the
// pre-softmax logits that produced `outputs` (the numerically standard fused
// form).  Throws if the target is infeasible for T frames or if `outputs`
// is not normalized.
CtcResult ctc_loss(const OutputMatrix& outputs, const LabelSequence& target);

// Loss only, via exhaustive enumeration of all |S|^T alignments: sums the
// probability of every alignment whose collapse equals the target.  This is
// the oracle the DP implementation is tested against; it refuses instances
// larger than `budget` alignments.
double ctc_loss_bruteforce(const OutputMatrix& outputs, const LabelSequence& target,
                           long long budget = 1000000);

// Probability of one specific length-T alignment, computed in log space.
double alignment_probability(const OutputMatrix& outputs, const Alignment& alignment);

}  // namespace ctckit

#endif  // CTCKIT_CTC_H_
