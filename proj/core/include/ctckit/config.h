// ctckit/config.h

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

#ifndef CTCKIT_CONFIG_H_
#define CTCKIT_CONFIG_H_

#include <string>

#include "ctckit/features.h"
#include "ctckit/grid.h"
#include "ctckit/model.h"
#include "ctckit/train.h"

namespace ctckit {

// Everything one `train` invocation needs, mirroring the CLI flags.
struct ExperimentConfig {
  ModelDims dims;
  double init_std = 0.04;
  MtlConfig mtl;
  bool multitask = false;
  TrainOptions train;
  FeatureConfig features;
  int beam_width = 100;
  std::string alphabet_path;
  std::string train_manifest;
  std::string dev_manifest;
  std::string task2_train_manifest;  // required when multitask
  std::string task2_alphabet_path;   // defaults to alphabet_path
};

// JSON configs.  Unknown keys are errors (they are usually typos); every
// key is optional and falls back to the struct defaults above.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

GridConfig parse_grid_config(const std::string& json_text);
GridConfig load_grid_config(const std::string& path);

Task2Size parse_task2_size(const std::string& value);   // "large" | "small"
Task2Mode parse_task2_mode(const std::string& value);   // "l1" | "l1l2"

}  // namespace ctckit

#endif  // CTCKIT_CONFIG_H_
