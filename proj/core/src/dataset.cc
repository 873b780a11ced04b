// ctckit/dataset.cc

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

#include "ctckit/dataset.h"

#include <filesystem>
#include <fstream>

#include "ctckit/error.h"
#include "ctckit/feature_io.h"
#include "ctckit/wav.h"

namespace fs = std::filesystem;

namespace ctckit {

Dataset load_dataset(const std::string& manifest_path, const Alphabet& alphabet,
                     const FeatureConfig& config, const std::string& task) {
  std::ifstream in(manifest_path);
  require(bool(in), "load_dataset: cannot open manifest ", manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();

  Dataset dataset;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    require(tab1 != std::string::npos && tab2 != std::string::npos,
            "load_dataset: ", manifest_path, " line ", line_no,
            ": expected 3 tab-separated fields (id, path, transcript)");
    require(line.find('\t', tab2 + 1) == std::string::npos, "load_dataset: ", manifest_path, " line ",
            line_no, ": too many fields");

    Utterance utt;
    utt.id = line.substr(0, tab1);
    utt.task = task;
    std::string path = line.substr(tab1 + 1, tab2 - tab1 - 1);
    utt.transcript = line.substr(tab2 + 1);
    require(!utt.id.empty(), "load_dataset: ", manifest_path, " line ", line_no, ": empty id");
    require(!path.empty(), "load_dataset: ", manifest_path, " line ", line_no, ": empty path");

    try {
      utt.labels = alphabet.parse(utt.transcript);
    } catch (const Error& e) {
      raise("load_dataset: utterance '", utt.id, "' (", manifest_path, " line ", line_no,
            "): ", e.what());
    }

    fs::path resolved = fs::path(path).is_absolute() ? fs::path(path) : base / path;
    if (resolved.extension() == ".wav") {
      AudioBuffer audio = read_wav(resolved.string());
      utt.features = featurize(audio, config).frames;
    } else {
      utt.features = read_feature_file(resolved.string());
    }
    dataset.utts.push_back(std::move(utt));
  }
  return dataset;
}

void write_manifest(const Dataset& dataset, const std::string& manifest_path,
                    const std::string& feature_dir) {
  std::ofstream out(manifest_path);
  require(bool(out), "write_manifest: cannot open ", manifest_path, " for writing");
  for (const auto& utt : dataset.utts) {
    require(utt.transcript.find('\t') == std::string::npos, "write_manifest: utterance '", utt.id,
            "' transcript contains a tab");
    out << utt.id << '\t' << feature_dir << '/' << utt.id << ".feat" << '\t' << utt.transcript << "\n";
  }
  require(bool(out), "write_manifest: write failed for ", manifest_path);
}

std::string save_dataset(const Dataset& dataset, const std::string& dir, const std::string& name) {
  fs::create_directories(fs::path(dir) / "feats");
  for (const auto& utt : dataset.utts) {
    write_feature_file(utt.features, (fs::path(dir) / "feats" / (utt.id + ".feat")).string());
  }
  const std::string manifest = (fs::path(dir) / (name + ".tsv")).string();
  write_manifest(dataset, manifest, "feats");
  return manifest;
}

}  // namespace ctckit
