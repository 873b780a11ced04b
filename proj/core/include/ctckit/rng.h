// ctckit/rng.h

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

#ifndef CTCKIT_RNG_H_
#define CTCKIT_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace ctckit {

// FNV-1a, used to derive independent streams from (seed, tag) pairs so that
// e.g. layer initialization does not depend on how many layers were built
// before it.  All experiment-level determinism rests on these derivations.
inline std::uint64_t hash_tag(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : tag) mix_byte(static_cast<unsigned char>(c));
  return h;
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view tag) {
  return std::mt19937_64(hash_tag(seed, tag));
}

}  // namespace ctckit

#endif  // CTCKIT_RNG_H_
