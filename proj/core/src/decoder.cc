// ctckit/decoder.cc

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

#include "ctckit/decoder.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "ctckit/error.h"

namespace ctckit {

LabelSequence collapse_alignment(const Alignment& path, int blank) {
  LabelSequence labels;
  int prev = blank;
  for (int sym : path) {
    if (sym != prev && sym != blank) labels.push_back(sym);
    prev = sym;
  }
  return labels;
}

LabelSequence best_path_decode(const OutputMatrix& outputs) {
  validate_output_matrix(outputs);
  Alignment path(outputs.num_frames());
  for (int t = 0; t < outputs.num_frames(); ++t) {
    const double* row = outputs.logp.row(t);
    int best = 0;
    for (int k = 1; k < outputs.num_symbols(); ++k)
      if (row[k] > row[best]) best = k;  // strict: ties keep the lower index
    path[t] = best;
  }
  return collapse_alignment(path);
}

namespace {

// Blank-ending and non-blank-ending log probability mass of one prefix.
struct PrefixMass {
  double blank = kLogZero;
  double non_blank = kLogZero;

  double total() const { return log_sum_exp(blank, non_blank); }
};

using Beam = std::map<LabelSequence, PrefixMass>;

}  // namespace

DecodeResult beam_search_decode(const OutputMatrix& outputs, int beam_width) {
  require(beam_width >= 1, "beam_search_decode: beam_width must be >= 1");
  validate_output_matrix(outputs);
  const int t_len = outputs.num_frames();
  const int s_len = outputs.num_symbols();

  Beam beam;
  beam[{}].blank = 0.0;  // empty labeling, empty alignment so far

  for (int t = 0; t < t_len; ++t) {
    const double* logp = outputs.logp.row(t);
    Beam next;
    for (const auto& [prefix, mass] : beam) {
      const double total = mass.total();
      // emit blank: the prefix is unchanged and now ends in blank
      {
        PrefixMass& out = next[prefix];
        out.blank = log_sum_exp(out.blank, total + logp[Alphabet::kBlank]);
      }
      const int last = prefix.empty() ? Alphabet::kBlank : prefix.back();
      for (int sym = 1; sym < s_len; ++sym) {
        if (sym == last) {
          // repeated emission merges into the same prefix...
          PrefixMass& same = next[prefix];
          same.non_blank = log_sum_exp(same.non_blank, mass.non_blank + logp[sym]);
          // ...unless a blank intervened, which starts a new copy
          LabelSequence extended = prefix;
          extended.push_back(sym);
          PrefixMass& out = next[extended];
          out.non_blank = log_sum_exp(out.non_blank, mass.blank + logp[sym]);
        } else {
          LabelSequence extended = prefix;
          extended.push_back(sym);
          PrefixMass& out = next[extended];
          out.non_blank = log_sum_exp(out.non_blank, total + logp[sym]);
        }
      }
    }
    if (static_cast<int>(next.size()) > beam_width) {
      // std::map iteration is already lexicographic, so stable_sort by
      // score keeps the lexicographic order among equal scores.
      std::vector<Beam::iterator> order;
      order.reserve(next.size());
      for (auto it = next.begin(); it != next.end(); ++it) order.push_back(it);
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& a, const auto& b) { return a->second.total() > b->second.total(); });
      Beam pruned;
      for (int i = 0; i < beam_width; ++i) pruned.insert(*order[i]);
      next = std::move(pruned);
    }
    beam = std::move(next);
  }

  DecodeResult best;
  best.log_prob = kLogZero;
  for (const auto& [prefix, mass] : beam) {
    const double total = mass.total();
    if (total > best.log_prob) {  // strictly greater: first (lex-least) tie wins
      best.log_prob = total;
      best.labels = prefix;
    }
  }
  return best;
}

DecodeResult exhaustive_decode(const OutputMatrix& outputs, long long budget) {
  validate_output_matrix(outputs);
  const int t_len = outputs.num_frames();
  const int s_len = outputs.num_symbols();

  long long total_paths = 1;
  for (int t = 0; t < t_len; ++t) {
    total_paths *= s_len;
    require(total_paths <= budget, "exhaustive_decode: |S|^T exceeds budget of ", budget,
            " alignments");
  }

  std::map<LabelSequence, double> mass;
  Alignment path(t_len, 0);
  while (true) {
    double log_path = 0.0;
    for (int t = 0; t < t_len; ++t) log_path += outputs.logp(t, path[t]);
    mass[collapse_alignment(path)] += std::exp(log_path);
    if (t_len == 0) break;
    int pos = t_len - 1;
    while (pos >= 0 && path[pos] == s_len - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }

  DecodeResult best;
  double best_prob = -1.0;
  for (const auto& [labels, prob] : mass) {  // lexicographic order; ties keep the first
    if (prob > best_prob) {
      best_prob = prob;
      best.labels = labels;
    }
  }
  best.log_prob = std::log(best_prob);
  return best;
}

}  // namespace ctckit
