// ctckit/alphabet.h

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

#ifndef CTCKIT_ALPHABET_H_
#define CTCKIT_ALPHABET_H_

#include <map>
#include <string>
#include <vector>

namespace ctckit {

// A decoded labeling: symbol indices into an Alphabet, never containing blank.
using LabelSequence = std::vector<int>;

// A length-T frame-level path through the output symbols (blank allowed).
using Alignment = std::vector<int>;

// Ordered output symbol set.  Index 0 is always blank, 1 is space, 2 is the
// noise token; language characters follow.  The on-disk format is one symbol
// per line, UTF-8, with the literals <blank>, <space>, <noise> for the
// reserved entries; line order defines index order.
class Alphabet {
 public:
  static constexpr int kBlank = 0;
  static constexpr int kSpace = 1;
  static constexpr int kNoise = 2;

  Alphabet() = default;

  // Builds blank/space/noise plus the given character symbols, in order.
  static Alphabet with_characters(const std::vector<std::string>& characters);

  // The 26 lowercase English letters plus the reserved symbols: 29 outputs.
  static Alphabet english();

  static Alphabet from_file(const std::string& path);
  void to_file(const std::string& path) const;

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int index) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

  // Rendering: space becomes ' ', noise becomes the marker (default "*").
  std::string render(const LabelSequence& labels) const;

  // Inverse of render.  Throws on characters outside the alphabet, naming
  // the offending symbol.
  LabelSequence parse(const std::string& text) const;

  const std::string& noise_marker() const { return noise_marker_; }
  void set_noise_marker(const std::string& marker);

  bool operator==(const Alphabet& other) const {
    return symbols_ == other.symbols_ && noise_marker_ == other.noise_marker_;
  }

 private:
  void rebuild_index();

  std::vector<std::string> symbols_;
  std::string noise_marker_ = "*";
  std::map<std::string, int> index_;  // rendered text -> symbol index
};

}  // namespace ctckit

#endif  // CTCKIT_ALPHABET_H_
