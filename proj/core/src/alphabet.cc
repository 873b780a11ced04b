// ctckit/alphabet.cc

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

#include "ctckit/alphabet.h"

#include <fstream>

#include "ctckit/error.h"

namespace ctckit {

namespace {
const char* kBlankLiteral = "<blank>";
const char* kSpaceLiteral = "<space>";
const char* kNoiseLiteral = "<noise>";

// Length in bytes of the UTF-8 code point starting at text[pos].
int utf8_len(const std::string& text, std::size_t pos) {
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xe) return 3;
  if ((c >> 3) == 0x1e) return 4;
  return 1;  // invalid lead byte; treat as a single symbol and fail lookup
}
}  // namespace

Alphabet Alphabet::with_characters(const std::vector<std::string>& characters) {
  Alphabet a;
  a.symbols_ = {kBlankLiteral, kSpaceLiteral, kNoiseLiteral};
  for (const auto& c : characters) {
    require(!c.empty(), "Alphabet: empty character symbol");
    a.symbols_.push_back(c);
  }
  a.rebuild_index();
  return a;
}

Alphabet Alphabet::english() {
  std::vector<std::string> chars;
  for (char c = 'a'; c <= 'z'; ++c) chars.emplace_back(1, c);
  return with_characters(chars);
}

Alphabet Alphabet::from_file(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), "Alphabet: cannot open ", path);
  Alphabet a;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    a.symbols_.push_back(line);
  }
  require(a.symbols_.size() >= 3, "Alphabet: ", path, " has fewer than the 3 reserved symbols");
  require(a.symbols_[kBlank] == kBlankLiteral, "Alphabet: ", path, " line 1 must be ", kBlankLiteral);
  require(a.symbols_[kSpace] == kSpaceLiteral, "Alphabet: ", path, " line 2 must be ", kSpaceLiteral);
  require(a.symbols_[kNoise] == kNoiseLiteral, "Alphabet: ", path, " line 3 must be ", kNoiseLiteral);
  a.rebuild_index();
  return a;
}

void Alphabet::to_file(const std::string& path) const {
  std::ofstream out(path);
  require(bool(out), "Alphabet: cannot open ", path, " for writing");
  for (const auto& s : symbols_) out << s << "\n";
  require(bool(out), "Alphabet: write failed for ", path);
}

const std::string& Alphabet::symbol(int index) const {
  require(index >= 0 && index < size(), "Alphabet: symbol index ", index, " out of range (size ", size(),
          ")");
  return symbols_[index];
}

void Alphabet::set_noise_marker(const std::string& marker) {
  require(!marker.empty(), "Alphabet: noise marker must be non-empty");
  noise_marker_ = marker;
  rebuild_index();
}

void Alphabet::rebuild_index() {
  index_.clear();
  for (int i = 0; i < size(); ++i) {
    if (i == kBlank) continue;  // blank never appears in rendered text
    std::string key;
    if (i == kSpace) {
      key = " ";
    } else if (i == kNoise) {
      key = noise_marker_;
    } else {
      key = symbols_[i];
    }
    auto [it, inserted] = index_.emplace(key, i);
    require(inserted, "Alphabet: duplicate rendered symbol '", key, "'");
  }
}

std::string Alphabet::render(const LabelSequence& labels) const {
  std::string text;
  for (int idx : labels) {
    require(idx != kBlank, "Alphabet: blank index in label sequence");
    if (idx == kSpace) {
      text += ' ';
    } else if (idx == kNoise) {
      text += noise_marker_;
    } else {
      text += symbol(idx);
    }
  }
  return text;
}

LabelSequence Alphabet::parse(const std::string& text) const {
  LabelSequence labels;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const int len = utf8_len(text, pos);
    const std::string sym = text.substr(pos, len);
    auto it = index_.find(sym);
    require(it != index_.end(), "Alphabet: symbol '", sym, "' at byte ", pos, " not in alphabet");
    labels.push_back(it->second);
    pos += len;
  }
  return labels;
}

}  // namespace ctckit
