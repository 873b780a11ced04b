// ctckit/ctc.cc

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

#include "ctckit/ctc.h"

#include <algorithm>
#include <cmath>

#include "ctckit/decoder.h"
#include "ctckit/error.h"

namespace ctckit {

Vector softmax_frame(const Vector& logits) {
  require(!logits.empty(), "softmax_frame: empty logits");
  double max_logit = logits[0];
  for (double v : logits) {
    require(std::isfinite(v), "softmax_frame: non-finite logit");
    max_logit = std::max(max_logit, v);
  }
  Vector probs(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

OutputMatrix log_softmax(const Matrix& logits) {
  OutputMatrix out;
  out.logp = Matrix(logits.rows, logits.cols);
  for (int t = 0; t < logits.rows; ++t) {
    const double* in = logits.row(t);
    double* dst = out.logp.row(t);
    double max_logit = in[0];
    for (int k = 1; k < logits.cols; ++k) max_logit = std::max(max_logit, in[k]);
    require(std::isfinite(max_logit), "log_softmax: non-finite logits in frame ", t);
    double sum = 0.0;
    for (int k = 0; k < logits.cols; ++k) sum += std::exp(in[k] - max_logit);
    const double lse = max_logit + std::log(sum);
    for (int k = 0; k < logits.cols; ++k) dst[k] = in[k] - lse;
  }
  return out;
}

void validate_output_matrix(const OutputMatrix& outputs, double tolerance) {
  require(outputs.num_symbols() >= 2, "OutputMatrix: need at least 2 symbols, got ",
          outputs.num_symbols());
  for (int t = 0; t < outputs.num_frames(); ++t) {
    const double* row = outputs.logp.row(t);
    double acc = kLogZero;
    for (int k = 0; k < outputs.num_symbols(); ++k) {
      require(row[k] <= 1e-12, "OutputMatrix: log-probability above 0 at frame ", t, " symbol ", k);
      acc = log_sum_exp(acc, row[k]);
    }
    require(std::abs(acc) <= tolerance, "OutputMatrix: frame ", t,
            " is not normalized (log-sum = ", acc, ")");
  }
}

std::vector<int> expand_with_blanks(const LabelSequence& target, int blank) {
  std::vector<int> expanded;
  expanded.reserve(2 * target.size() + 1);
  expanded.push_back(blank);
  for (int label : target) {
    expanded.push_back(label);
    expanded.push_back(blank);
  }
  return expanded;
}

int min_alignment_frames(const LabelSequence& target) {
  int repeats = 0;
  for (std::size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++repeats;
  return static_cast<int>(target.size()) + repeats;
}

namespace {

void check_target(const OutputMatrix& outputs, const LabelSequence& target) {
  for (int label : target) {
    require(label != Alphabet::kBlank, "ctc: target contains the blank symbol");
    require(label > 0 && label < outputs.num_symbols(), "ctc: target label ", label,
            " out of range for ", outputs.num_symbols(), " symbols");
  }
}

}  // namespace

CtcResult ctc_loss(const OutputMatrix& outputs, const LabelSequence& target) {
  validate_output_matrix(outputs);
  check_target(outputs, target);
  const int t_len = outputs.num_frames();
  const int min_frames = min_alignment_frames(target);
  require(t_len >= min_frames, "ctc_loss: target too long for T: needs at least ", min_frames,
          " frames, output has ", t_len);

  const std::vector<int> expanded = expand_with_blanks(target);
  const int u_len = static_cast<int>(expanded.size());
  const Matrix& logp = outputs.logp;

  // Forward variables; alpha(t,u) includes the emission at frame t.
  Matrix alpha(t_len, u_len, kLogZero);
  alpha(0, 0) = logp(0, expanded[0]);
  if (u_len > 1) alpha(0, 1) = logp(0, expanded[1]);
  for (int t = 1; t < t_len; ++t) {
    for (int u = 0; u < u_len; ++u) {
      double acc = alpha(t - 1, u);
      if (u > 0) acc = log_sum_exp(acc, alpha(t - 1, u - 1));
      if (u > 1 && expanded[u] != Alphabet::kBlank && expanded[u] != expanded[u - 2])
        acc = log_sum_exp(acc, alpha(t - 1, u - 2));
      alpha(t, u) = acc == kLogZero ? kLogZero : acc + logp(t, expanded[u]);
    }
  }
  double log_prob = alpha(t_len - 1, u_len - 1);
  if (u_len > 1) log_prob = log_sum_exp(log_prob, alpha(t_len - 1, u_len - 2));
  require(log_prob != kLogZero, "ctc_loss: target has zero probability under the output matrix");

  // Backward variables, also including the emission at frame t.
  Matrix beta(t_len, u_len, kLogZero);
  beta(t_len - 1, u_len - 1) = logp(t_len - 1, expanded[u_len - 1]);
  if (u_len > 1) beta(t_len - 1, u_len - 2) = logp(t_len - 1, expanded[u_len - 2]);
  for (int t = t_len - 2; t >= 0; --t) {
    for (int u = 0; u < u_len; ++u) {
      double acc = beta(t + 1, u);
      if (u + 1 < u_len) acc = log_sum_exp(acc, beta(t + 1, u + 1));
      if (u + 2 < u_len && expanded[u + 2] != Alphabet::kBlank && expanded[u + 2] != expanded[u])
        acc = log_sum_exp(acc, beta(t + 1, u + 2));
      beta(t, u) = acc == kLogZero ? kLogZero : acc + logp(t, expanded[u]);
    }
  }

  // Gradient w.r.t. logits: y - posterior.  alpha*beta double-counts the
  // frame-t emission, hence the logp subtraction.
  CtcResult result;
  result.loss = -log_prob;
  result.logit_grad = Matrix(t_len, outputs.num_symbols());
  Vector occupancy(outputs.num_symbols());
  for (int t = 0; t < t_len; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kLogZero);
    for (int u = 0; u < u_len; ++u) {
      if (alpha(t, u) == kLogZero || beta(t, u) == kLogZero) continue;
      const int sym = expanded[u];
      occupancy[sym] =
          log_sum_exp(occupancy[sym], alpha(t, u) + beta(t, u) - logp(t, sym));
    }
    double* grad_row = result.logit_grad.row(t);
    for (int k = 0; k < outputs.num_symbols(); ++k) {
      const double y = std::exp(logp(t, k));
      const double posterior = occupancy[k] == kLogZero ? 0.0 : std::exp(occupancy[k] - log_prob);
      grad_row[k] = y - posterior;
    }
  }
  return result;
}

double ctc_loss_bruteforce(const OutputMatrix& outputs, const LabelSequence& target,
                           long long budget) {
  validate_output_matrix(outputs);
  check_target(outputs, target);
  const int t_len = outputs.num_frames();
  const int s_len = outputs.num_symbols();
  require(t_len >= 1, "ctc_loss_bruteforce: empty output matrix");

  long long total_paths = 1;
  for (int t = 0; t < t_len; ++t) {
    total_paths *= s_len;
    require(total_paths <= budget, "ctc_loss_bruteforce: |S|^T exceeds budget of ", budget,
            " alignments");
  }

  // Odometer over all |S|^T alignments.
  Alignment path(t_len, 0);
  double total_prob = 0.0;
  while (true) {
    if (collapse_alignment(path) == target) {
      double log_path = 0.0;
      for (int t = 0; t < t_len; ++t) log_path += outputs.logp(t, path[t]);
      total_prob += std::exp(log_path);
    }
    int pos = t_len - 1;
    while (pos >= 0 && path[pos] == s_len - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }
  return -std::log(total_prob);
}

double alignment_probability(const OutputMatrix& outputs, const Alignment& alignment) {
  require(static_cast<int>(alignment.size()) == outputs.num_frames(),
          "alignment_probability: alignment length ", alignment.size(), " != T = ",
          outputs.num_frames());
  double log_prob = 0.0;
  for (int t = 0; t < outputs.num_frames(); ++t) {
    const int sym = alignment[t];
    require(sym >= 0 && sym < outputs.num_symbols(), "alignment_probability: symbol ", sym,
            " out of range at frame ", t);
    log_prob += outputs.logp(t, sym);
  }
  return std::exp(log_prob);
}

}  // namespace ctckit
