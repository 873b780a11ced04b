// ctckit/feature_io.cc

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

#include "ctckit/feature_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ctckit/error.h"

namespace ctckit {

static_assert(std::endian::native == std::endian::little,
              "feature/checkpoint files are little-endian; big-endian hosts need byte swapping");

namespace {
constexpr char kMagic[8] = {'C', 'T', 'C', 'K', 'F', 'E', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_feature_file(const Matrix& features, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "write_feature_file: cannot open ", path, " for writing");
  out.write(kMagic, 8);
  const std::uint32_t version = kVersion;
  const std::uint32_t t = static_cast<std::uint32_t>(features.rows);
  const std::uint32_t d = static_cast<std::uint32_t>(features.cols);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&t), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(features.data.data()),
            static_cast<std::streamsize>(features.data.size() * sizeof(double)));
  require(bool(out), "write_feature_file: write failed for ", path);
}

Matrix read_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "read_feature_file: cannot open ", path);
  char magic[8];
  in.read(magic, 8);
  require(bool(in) && std::memcmp(magic, kMagic, 8) == 0, "read_feature_file: ", path,
          " is not a feature file (bad magic)");
  std::uint32_t version = 0, t = 0, d = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&t), 4);
  in.read(reinterpret_cast<char*>(&d), 4);
  require(bool(in), "read_feature_file: truncated header in ", path);
  require(version == kVersion, "read_feature_file: ", path, " has version ", version, ", expected ",
          kVersion);
  Matrix features(static_cast<int>(t), static_cast<int>(d));
  in.read(reinterpret_cast<char*>(features.data.data()),
          static_cast<std::streamsize>(features.data.size() * sizeof(double)));
  require(bool(in), "read_feature_file: truncated data in ", path, " (expected ", t, "x", d, " doubles)");
  require(features.all_finite(), "read_feature_file: non-finite values in ", path);
  return features;
}

}  // namespace ctckit
