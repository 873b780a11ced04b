// ctckit/dataset.h

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

#ifndef CTCKIT_DATASET_H_
#define CTCKIT_DATASET_H_

#include <string>
#include <vector>

#include "ctckit/alphabet.h"
#include "ctckit/features.h"

namespace ctckit {

struct Utterance {
  std::string id;
  Matrix features;       // T x D, already stacked/decimated
  LabelSequence labels;  // transcript parsed against the task alphabet
  std::string transcript;
  std::string task;
};

struct Dataset {
  std::vector<Utterance> utts;

  bool empty() const { return utts.empty(); }
  std::size_t size() const { return utts.size(); }
};

// Manifest format: one utterance per line, `id<TAB>path<TAB>transcript`.
// `path` may be a feature file (read as-is) or a .wav (run through the
// front end with `config`).  Relative paths resolve against the manifest's
// directory.  Malformed lines and out-of-alphabet transcript symbols are
// errors naming the line / utterance.
Dataset load_dataset(const std::string& manifest_path, const Alphabet& alphabet,
                     const FeatureConfig& config = {}, const std::string& task = "task1");

// Writes manifest lines for utterances whose features were saved under
// feature_dir as <id>.feat.
void write_manifest(const Dataset& dataset, const std::string& manifest_path,
                    const std::string& feature_dir);

// Saves every utterance's features as <dir>/<id>.feat and a manifest at
// <dir>/<name>.tsv; returns the manifest path.
std::string save_dataset(const Dataset& dataset, const std::string& dir, const std::string& name);

}  // namespace ctckit

#endif  // CTCKIT_DATASET_H_
