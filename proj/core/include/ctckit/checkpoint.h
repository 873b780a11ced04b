// ctckit/checkpoint.h

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

#ifndef CTCKIT_CHECKPOINT_H_
#define CTCKIT_CHECKPOINT_H_

#include <string>

#include "ctckit/adam.h"
#include "ctckit/model.h"

namespace ctckit {

struct TrainingMeta {
  int epoch = 0;
  double best_val_loss = 0.0;
  std::uint64_t seed = 0;
  long long infeasible_skipped = 0;
};

struct Checkpoint {
  ModelGraph model;
  AdamState adam;
  bool has_adam = false;
  TrainingMeta meta;
};

// Versioned binary container: magic, format version, topology description
// (layer specs, task names, alphabets, normalizer), every parameter block,
// optional optimizer state, training metadata.  load(save(x)) is bit-exact;
// version mismatches and truncated/corrupt files are errors with offset
// diagnostics.
void save_checkpoint(ModelGraph& model, const AdamState* adam, const TrainingMeta& meta,
                     const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ctckit

#endif  // CTCKIT_CHECKPOINT_H_
