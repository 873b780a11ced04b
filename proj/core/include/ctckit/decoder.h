// ctckit/decoder.h

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

#ifndef CTCKIT_DECODER_H_
#define CTCKIT_DECODER_H_

#include "ctckit/alphabet.h"
#include "ctckit/ctc.h"

namespace ctckit {

// Merges consecutive repeats, then deletes blanks: (-,a,a,-,b) -> "ab".
LabelSequence collapse_alignment(const Alignment& path, int blank = Alphabet::kBlank);

// Collapse of the per-frame argmax path; argmax ties break toward the
// lowest symbol index (so fully uniform columns decode to blank).
LabelSequence best_path_decode(const OutputMatrix& outputs);

struct DecodeResult {
  LabelSequence labels;
  double log_prob = 0.0;  // total log probability mass of the labeling
};

// Prefix beam search without any language model or lexicon: hypotheses are
// labeling prefixes carrying separate blank-ending / non-blank-ending
// probability mass, summed over alignments.  Deterministic: equal-score
// pruning and the final winner both break ties by lexicographic prefix
// order (so the empty labeling wins a full tie).
DecodeResult beam_search_decode(const OutputMatrix& outputs, int beam_width = 100);

// Enumerates every alignment, accumulates probability per collapsed
// labeling and returns the argmax labeling (lexicographic tie rule).  The
// oracle beam_search_decode is verified against; refuses instances above
// `budget` alignments.
DecodeResult exhaustive_decode(const OutputMatrix& outputs, long long budget = 1000000);

}  // namespace ctckit

#endif  // CTCKIT_DECODER_H_
