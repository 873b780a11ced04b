// ctckit/synth.cc

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

#include "ctckit/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctckit/error.h"
#include "ctckit/rng.h"

namespace ctckit {

namespace {

// Letters are named a, b, c, ... (wrapping to a2, b2, ... past 26, which is
// far beyond any desk-scale spec).
std::vector<std::string> letter_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    std::string name(1, static_cast<char>('a' + i % 26));
    if (i >= 26) name += std::to_string(i / 26 + 1);
    names.push_back(name);
  }
  return names;
}

struct Prototypes {
  // per symbol index: one vector per language
  std::vector<Vector> lang_a;
  std::vector<Vector> lang_b;
};

Prototypes draw_prototypes(const SynthSpec& spec, const Alphabet& alphabet, std::uint64_t seed) {
  Prototypes protos;
  const int n_symbols = alphabet.size();
  protos.lang_a.assign(n_symbols, {});
  protos.lang_b.assign(n_symbols, {});
  const double rho = spec.proto_correlation;
  const double ortho = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (int sym = 1; sym < n_symbols; ++sym) {  // blank never emits frames
    auto rng = seeded_rng(seed, str_cat("proto/", alphabet.symbol(sym)));
    std::normal_distribution<double> dist(0.0, spec.proto_stddev);
    Vector base(spec.feature_dim), delta(spec.feature_dim);
    for (double& v : base) v = dist(rng);
    for (double& v : delta) v = dist(rng);
    protos.lang_a[sym] = base;
    if (sym == Alphabet::kSpace) {
      // silence is not accent-specific
      protos.lang_b[sym] = base;
    } else {
      Vector other(spec.feature_dim);
      for (int d = 0; d < spec.feature_dim; ++d) other[d] = rho * base[d] + ortho * delta[d];
      protos.lang_b[sym] = other;
    }
  }
  return protos;
}

LabelSequence random_transcript(const SynthSpec& spec, const Alphabet& alphabet,
                                std::mt19937_64* rng) {
  std::uniform_int_distribution<int> n_chars_dist(spec.min_chars, spec.max_chars);
  std::uniform_int_distribution<int> letter_dist(3, alphabet.size() - 1);
  const int n_chars = n_chars_dist(*rng);
  LabelSequence labels;
  // one space roughly mid-utterance once transcripts are long enough
  const int space_after = n_chars >= 5 ? n_chars / 2 : -1;
  for (int i = 0; i < n_chars; ++i) {
    labels.push_back(letter_dist(*rng));
    if (i + 1 == space_after) labels.push_back(Alphabet::kSpace);
  }
  return labels;
}

// Renders a transcript to frames.  use_accent selects lang-B prototypes for
// symbols in the accent set; lang selects the base prototype table.
Matrix render_utterance(const SynthSpec& spec, const LabelSequence& labels, const Prototypes& protos,
                        bool lang_b, const std::vector<bool>& accented, std::mt19937_64* rng) {
  std::uniform_int_distribution<int> frames_dist(spec.frames_per_char_min, spec.frames_per_char_max);
  std::normal_distribution<double> noise(0.0, spec.noise_stddev);
  std::vector<std::pair<int, int>> segments;  // (symbol, n_frames)
  int total = 0;
  for (int sym : labels) {
    const int n = frames_dist(*rng);
    segments.emplace_back(sym, n);
    total += n;
  }
  Matrix frames(total, spec.feature_dim);
  int t = 0;
  for (const auto& [sym, n] : segments) {
    const bool use_b = lang_b || accented[sym];
    const Vector& proto = use_b ? protos.lang_b[sym] : protos.lang_a[sym];
    for (int k = 0; k < n; ++k, ++t) {
      double* row = frames.row(t);
      for (int d = 0; d < spec.feature_dim; ++d) row[d] = proto[d] + noise(*rng);
    }
  }
  return frames;
}

Dataset make_dataset(const SynthSpec& spec, const Alphabet& alphabet, const Prototypes& protos,
                     const std::string& name, int count, bool lang_b,
                     const std::vector<bool>& accented, std::uint64_t seed, const std::string& task) {
  Dataset dataset;
  for (int i = 0; i < count; ++i) {
    Utterance utt;
    utt.id = str_cat(name, "-", i);
    utt.task = task;
    auto rng = seeded_rng(seed, str_cat("utt/", name, "/", i));
    utt.labels = random_transcript(spec, alphabet, &rng);
    utt.transcript = alphabet.render(utt.labels);
    utt.features = render_utterance(spec, utt.labels, protos, lang_b, accented, &rng);
    dataset.utts.push_back(std::move(utt));
  }
  return dataset;
}

}  // namespace

SynthCorpus generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed) {
  require(spec.overlap_fraction >= 0.0 && spec.overlap_fraction <= 1.0,
          "generate_synthetic_corpus: overlap_fraction must be in [0,1], got ", spec.overlap_fraction);
  require(spec.proto_correlation >= 0.0 && spec.proto_correlation <= 1.0,
          "generate_synthetic_corpus: proto_correlation must be in [0,1]");
  require(spec.n_letters >= 2, "generate_synthetic_corpus: need at least 2 letters");
  require(spec.feature_dim >= 1, "generate_synthetic_corpus: feature_dim must be positive");
  require(spec.frames_per_char_min >= 1 && spec.frames_per_char_max >= spec.frames_per_char_min,
          "generate_synthetic_corpus: bad frames_per_char range");
  require(spec.min_chars >= 1 && spec.max_chars >= spec.min_chars,
          "generate_synthetic_corpus: bad transcript length range");

  SynthCorpus corpus;
  corpus.alphabet = Alphabet::with_characters(letter_names(spec.n_letters));

  const Prototypes protos = draw_prototypes(spec, corpus.alphabet, seed);

  // Seeded choice of which letters the accent renders with lang-B sounds.
  std::vector<int> letters(spec.n_letters);
  std::iota(letters.begin(), letters.end(), 3);
  auto accent_rng = seeded_rng(seed, "accent-set");
  std::shuffle(letters.begin(), letters.end(), accent_rng);
  const int n_accented = static_cast<int>(std::lround(spec.overlap_fraction * spec.n_letters));
  corpus.accent_set.assign(letters.begin(), letters.begin() + n_accented);
  std::sort(corpus.accent_set.begin(), corpus.accent_set.end());

  std::vector<bool> no_accent(corpus.alphabet.size(), false);
  std::vector<bool> accented(corpus.alphabet.size(), false);
  for (int sym : corpus.accent_set) accented[sym] = true;

  const Alphabet& ab = corpus.alphabet;
  corpus.lang_a_train = make_dataset(spec, ab, protos, "a-train", spec.train_utts, false, no_accent, seed, "task1");
  corpus.lang_a_dev = make_dataset(spec, ab, protos, "a-dev", spec.dev_utts, false, no_accent, seed, "task1");
  corpus.lang_a_test = make_dataset(spec, ab, protos, "a-test", spec.test_utts, false, no_accent, seed, "task1");
  corpus.lang_b_train = make_dataset(spec, ab, protos, "b-train", spec.train_utts, true, no_accent, seed, "task2");
  corpus.lang_b_dev = make_dataset(spec, ab, protos, "b-dev", spec.dev_utts, true, no_accent, seed, "task2");
  corpus.lang_b_test = make_dataset(spec, ab, protos, "b-test", spec.test_utts, true, no_accent, seed, "task2");
  corpus.accented_train =
      make_dataset(spec, ab, protos, "acc-train", spec.accented_train_utts, false, accented, seed, "task1");
  corpus.accented_dev =
      make_dataset(spec, ab, protos, "acc-dev", spec.accented_dev_utts, false, accented, seed, "task1");
  corpus.accented_test =
      make_dataset(spec, ab, protos, "acc-test", spec.accented_test_utts, false, accented, seed, "task1");
  return corpus;
}

}  // namespace ctckit
