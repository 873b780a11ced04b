// ctckit/synth.h

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

#ifndef CTCKIT_SYNTH_H_
#define CTCKIT_SYNTH_H_

#include <cstdint>
#include <vector>

#include "ctckit/dataset.h"

namespace ctckit {

// Desk-scale stand-in for bilingual speech corpora.  Two "languages" share
// one character set but render each symbol with language-specific Gaussian
// prototype vectors plus per-frame noise.  "Accented" speech is lang-A text
// in which a fraction of the letter inventory (the seeded accent set) is
// rendered with lang-B prototypes, a controllable analog of L1-influenced
// L2 pronunciation.
struct SynthSpec {
  int n_letters = 8;
  int feature_dim = 10;
  int frames_per_char_min = 2;
  int frames_per_char_max = 4;
  double proto_stddev = 1.0;      // prototype scale
  double proto_correlation = 0.6; // cross-language similarity of a letter's prototypes, in [0,1]
  double noise_stddev = 0.45;     // per-frame noise around the prototype
  double overlap_fraction = 0.5;  // fraction of the letter inventory that is accented
  int min_chars = 3;              // transcript letters (excluding spaces)
  int max_chars = 8;
  int train_utts = 40;
  int dev_utts = 12;
  int test_utts = 24;
  int accented_train_utts = 32;
  int accented_dev_utts = 12;
  int accented_test_utts = 24;
};

struct SynthCorpus {
  Alphabet alphabet;  // shared character set for both languages
  Dataset lang_a_train, lang_a_dev, lang_a_test;
  Dataset lang_b_train, lang_b_dev, lang_b_test;
  Dataset accented_train, accented_dev, accented_test;
  std::vector<int> accent_set;  // letter symbol indices rendered with lang-B prototypes
};

// Deterministic per seed: every prototype, transcript and noise sample is
// drawn from a stream derived from (seed, purpose tags), so corpora are
// bit-identical across runs and independent of generation order.
SynthCorpus generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed);

}  // namespace ctckit

#endif  // CTCKIT_SYNTH_H_
